"""Named example instances shipped with the package."""

from __future__ import annotations

from .lattice import ConeSpec
from .polyhedron import HPoly
from .setmap import SetValuedMap


def running_example() -> SetValuedMap:
    """``f(x) = {z : z1 >= -x1 + x2, z2 >= -x1 - x2, z1 + z2 >= x1}`` for ``x1 >= 0``, empty otherwise.

    The cone is the nonnegative quadrant of ``Q^2``.
    """
    cone = ConeSpec.orthant(2)
    rows = [
        ((1, -1), (1, 0), 0),
        ((1, 1), (0, 1), 0),
        ((-1, 0), (1, 1), 0),
        ((1, 0), (0, 0), 0),
    ]
    return SetValuedMap.from_rows(2, 2, cone, rows)


def running_example_M() -> HPoly:
    """The line ``{x : x1 = 0}``."""
    return HPoly(2, (((1, 0), 0), ((-1, 0), 0)))


MAPS = {"running-example": running_example}


def _q(command, expected=None, **arguments):
    q = {"command": command, "arguments": arguments}
    if expected is not None:
        q["expected"] = expected
    return q


def _rows(*rows):
    return {"kind": "hrep", "rows": [[str(v) for v in r] for r in rows]}


def fixture_problem() -> dict:
    """A problem file exercising every command on the running example."""
    quadrant = {"dim": 2, "rows": [["1", "0", "0"], ["0", "1", "0"]]}
    return {
        "cone": quadrant,
        "maps": {"f": "running-example"},
        "sets": {
            "quadrant": _rows((1, 0, 0), (0, 1, 0)),
            "shifted": _rows((1, 0, 1), (0, 1, 2)),
            "eps_half": _rows(("1/2", 1, 0), (1, "1/2", 0)),
            "upper_e1": _rows((1, 0, 1), (0, 1, 0)),
            "upper_e2": _rows((1, 0, 0), (0, 1, 1)),
        },
        "vectors": {"w": [-1, -1], "w_skew": [-1, -2], "e1": [1, 0], "origin": [0, 0]},
        "queries": [
            _q("eval", _rows((1, 0, -1), (0, 1, -1), (1, 1, 1)), map="f", x=[1, 0]),
            _q("eval", {"kind": "empty"}, map="f", x=[-1, 0]),
            _q("dom", {"kind": "hrep", "dim": 2, "rows": [["1", "0", "0"]]}, map="f"),
            _q("scalarize", {"value": "1"}, map="f", zstar="w", x=[1, 0]),
            _q("scalarize", {"value": "0"}, map="f", zstar="w_skew", x=[1, 0]),
            _q("deriv", _rows((1, 1, 3)), map="f", zstar="w", x0=[1, 0], dir=[3, 5]),
            _q("deriv", {"kind": "empty"}, map="f", zstar="w", x0="origin", dir=[-1, 0]),
            _q("deriv", _rows((1, 0, 0)), map="f", zstar=[-1, 0], x0="origin", dir=[0, 0]),
            _q("deriv", map="f", zstar="w_skew", x0=[1, 0], dir=[3, 5]),
            _q("subdiff", map="f", zstar="w", x0="e1"),
            _q("subdiff", map="f", zstar="w", x0="origin"),
            _q("subdiff-contains", {"contains": True}, map="f", zstar="w", x0="e1", xstar="e1"),
            _q("subdiff-contains", {"contains": False}, map="f", zstar="w", x0="e1", xstar="origin"),
            _q("conj-pos", _rows((1, 1, 0)), map="f", xstar="e1", zstar="w"),
            _q("conj-neg", map="f", xstar="e1", zstar="w"),
            _q("residuate", {"kind": "empty"}, A="quadrant", B="eps_half"),
            _q("residuate", _rows((1, 0, -1), (0, 1, -2)), A="quadrant", B="shifted"),
            _q("z-residuate", _rows((1, 1, -3)), A="quadrant", B="shifted", zstar="w"),
            _q("oplus", _rows((1, 0, 1), (0, 1, 2)), A="quadrant", B="shifted"),
            _q("scale", _rows((1, 0, "1/2"), (0, 1, 1)), t="1/2", A="shifted"),
            _q("inf", _rows((1, 1, 1), (1, 0, 0), (0, 1, 0)), sets=["upper_e1", "upper_e2"]),
            _q("sup", _rows((1, 0, 1), (0, 1, 1)), sets=["upper_e1", "upper_e2"]),
            _q("infimum", _rows((1, 1, 0)), map="f"),
            _q("translate", _rows((1, 1, 2)), map="f", M="x1=0", x=[2, 9]),
            _q("translate", map="f", M=[[0, 0], [0, 1]], x=[2, 9]),
            _q("check-solution", map="f", x0=[0, 5], zstar="w"),
            _q("check-solution", map="f", x0=[0, 5], zstar="w_skew"),
            _q("check-infimizer", map="f", M="x1=0"),
            _q("check-infimizer", map="f", M=[[0, 0]]),
            _q("check-thm59", map="f", M="x1=0", zstars=[[-1, -1], [-1, -2]]),
            _q("check-optimality", map="f", M=[[1, 0]], zstars=[[-1, -1]]),
            _q("adjoint", map="f", x0="e1", zstar="w", ustar=[1, 1]),
            _q("adjoint", map="f", x0="origin", zstar="w", ustar=[0, 0]),
            _q("adjoint", {"kind": "empty"}, map="f", x0="origin", zstar="w", ustar=[1, 0]),
            _q("coderiv", map="f", x0="e1", z0=[-1, 2], zstar="w"),
            _q("coderiv", {"kind": "empty"}, map="f", x0="e1", z0=[0, 2], zstar="w"),
        ],
    }
