"""Brute-force recomputations used to validate the main algorithms.

Each oracle takes a different route from the implementation it checks:
residuation from the generators of the subtrahend, derivatives from
difference quotients on a geometric grid of step sizes, subgradients from
the subdifferential inequality at sample points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import lattice as lat
from . import polyhedron as ph
from . import setmap as sm
from .extreal import MINUS_INF, dot
from .lattice import HalfSpaceValue, UpperSet
from .polyhedron import HPoly
from .setmap import SetValuedMap

_ZERO = Fraction(0)


class OracleFailure(AssertionError):
    pass


@dataclass
class OracleReport:
    """Outcome of one oracle comparison, replayable from ``instance``."""

    name: str
    seed: int | None
    instance: dict
    expected: Any
    got: Any
    ok: bool
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "seed": self.seed, "instance": self.instance, "expected": self.expected,
                "got": self.got, "ok": self.ok, "notes": self.notes}

    def save(self, directory: str | Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{self.name}-{self.seed}.json"
        path.write_text(json.dumps(self.to_json(), sort_keys=True, indent=2))
        return path


def residuate_oracle(A: UpperSet, B: UpperSet) -> UpperSet:
    """``{z : B + z ⊆ A}`` from the generators of ``B``.

    ``z`` qualifies iff every vertex of ``B`` shifted by ``z`` lies in ``A``
    and every ray and line of ``B`` is a recession direction of ``A``.
    """
    cone = A.cone
    if B.is_empty:
        return UpperSet.ambient(cone)
    if A.is_ambient:
        return UpperSet.ambient(cone)
    if A.is_empty:
        return UpperSet.empty(cone)
    G = B.generators
    rows = A.poly.rows
    for r in G.rays:
        if any(dot(a, r) < 0 for a, _ in rows):
            return UpperSet.empty(cone)
    for l in G.lines:
        if any(dot(a, l) != 0 for a, _ in rows):
            return UpperSet.empty(cone)
    out = [(a, b - dot(a, v)) for v in G.vertices for a, b in rows]
    return UpperSet.from_hpoly(HPoly(cone.dim, tuple(out)), cone, check=False)


def derivative_oracle(f: SetValuedMap, zstar, x0: Sequence, x: Sequence, kmax: int = 20):
    """Limit of difference quotients at ``t = 2^-k``.

    Returns ``(value, levels)``.  Quotient levels must be nondecreasing in
    ``k`` (the quotient sets grow as ``t`` shrinks).  A finite level repeated at
    two consecutive ``k`` is final for polyhedral data, and so is ``+inf``.
    An empty quotient is only accepted as the limit once ``k = kmax`` is
    reached without any other value appearing.
    """
    levels = []
    for k in range(kmax + 1):
        q = sm.difference_quotient(f, zstar, x0, x, Fraction(1, 2 ** k))
        if levels and q.level < levels[-1]:
            raise OracleFailure(f"difference quotient not monotone at k={k}: {levels[-1]} then {q.level}")
        levels.append(q.level)
        if q.level.is_plus_inf:
            return q, levels
        if len(levels) >= 2 and levels[-1] == levels[-2] and q.level.is_finite:
            return q, levels
    if levels[-1] == MINUS_INF:
        return q, levels
    raise OracleFailure("difference quotients did not stabilize")


def quotient_step(levels: Sequence) -> Fraction:
    """Step ``t = 2^-k`` at which the derivative oracle stopped."""
    return Fraction(1, 2 ** (len(levels) - 1))


def subdiff_oracle(f: SetValuedMap, zstar, x0: Sequence, xstar: Sequence, sample_x: Sequence[Sequence]) -> bool:
    """Subdifferential inequality ``S_{(x*,z*)}(x - x0) ⊇ f(x) -_{z*} f(x0)`` at every sample."""
    zs = f.require_dual(zstar)
    x0 = tuple(Fraction(v) for v in x0)
    fx0 = sm.evaluate(f, x0)
    for x in sample_x:
        x = tuple(Fraction(v) for v in x)
        lhs = lat.S_value(xstar, zs, tuple(a - b for a, b in zip(x, x0)), f.cone)
        rhs = lat.z_residuate_value(sm.evaluate(f, x), fx0, zs)
        if not rhs.level <= lhs.level:
            return False
    return True


def vertex_samples(f: SetValuedMap, x0: Sequence) -> list[tuple]:
    """Deterministic sample points: ``x0``, ``x0 ± e_i`` and x-parts of graph vertices."""
    x0 = tuple(Fraction(v) for v in x0)
    pts = [x0]
    for i in range(f.nx):
        for s in (1, -1):
            pts.append(tuple(v + (s if j == i else 0) for j, v in enumerate(x0)))
    for v in f.graph.generators.vertices:
        pts.append(v[: f.nx])
    seen, out = set(), []
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def halfspace_level_equal(a: HalfSpaceValue, b: HalfSpaceValue) -> bool:
    return a.level == b.level
