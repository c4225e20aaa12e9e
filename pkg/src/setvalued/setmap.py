"""Convex set-valued maps with polyhedral graphs.

A map ``f : Q^nx -> lattice`` is stored through its graph
``{(x, z) : A x + B z >= c}``.  Values ``f(x) = {z : B z >= c - A x}`` are
upper sets as long as every ``B_i`` lies in the dual cone of ``C``, which
the constructor checks.

Scalarizations ``phi(x) = inf{-z*.z : z in f(x)}`` are single LPs.  The
directional derivative in the finite case comes from the LP dual
``max{(c - A x0).y : B^T y = -z*, y >= 0}``: its right derivative in the
direction ``-A x`` is the support of the dual optimal face.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import lattice as lat
from . import lp
from . import polyhedron as ph
from .extreal import MINUS_INF, PLUS_INF, ExtReal, dot, format_rational, to_rational
from .lattice import ConeSpec, HalfSpaceValue, UpperSet
from .polyhedron import GeneratorRep, HPoly

_ZERO = Fraction(0)


class MapError(ValueError):
    pass


def _vec(values, n: int | None = None, what: str = "vector") -> tuple:
    v = tuple(to_rational(x) for x in values)
    if n is not None and len(v) != n:
        raise ph.DimensionError(f"{what} has length {len(v)}, expected {n}")
    return v


@dataclass(frozen=True, eq=False)
class SetValuedMap:
    nx: int
    nz: int
    cone: ConeSpec
    graph: HPoly
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.graph.dim != self.nx + self.nz:
            raise ph.DimensionError("graph dimension must be nx + nz")
        if self.cone.dim != self.nz:
            raise ph.DimensionError("cone dimension must be nz")
        for _, B, _ in self.rows:
            if any(B) and ph.infimum_of(self.cone.hrep, B) < 0:
                raise MapError("a graph row is not bounded below on the ordering cone; values would not be upper sets")

    @classmethod
    def from_rows(cls, nx: int, nz: int, cone: ConeSpec, rows: Sequence) -> "SetValuedMap":
        """``rows`` are ``(A_i, B_i, c_i)`` triples."""
        hrows = []
        for A, B, c in rows:
            hrows.append((_vec(A, nx, "x-part") + _vec(B, nz, "z-part"), to_rational(c)))
        return cls(nx, nz, cone, HPoly(nx + nz, tuple(hrows)))

    @cached_property
    def rows(self) -> tuple:
        return tuple((a[: self.nx], a[self.nx:], b) for a, b in self.graph.rows)

    @property
    def A(self) -> tuple:
        return tuple(r[0] for r in self.rows)

    @property
    def B(self) -> tuple:
        return tuple(r[1] for r in self.rows)

    @property
    def c(self) -> tuple:
        return tuple(r[2] for r in self.rows)

    @cached_property
    def domain(self) -> HPoly:
        return ph.project(self.graph, range(self.nx))

    @cached_property
    def is_conic(self) -> bool:
        return self.graph.is_homogeneous

    def to_json(self) -> dict:
        return {"nx": self.nx, "nz": self.nz, "cone": self.cone.to_json(), "graph": self.graph.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "SetValuedMap":
        nx, nz = int(obj["nx"]), int(obj["nz"])
        cone = ConeSpec.from_json(obj["cone"])
        graph = HPoly.from_json(obj["graph"])
        return cls(nx, nz, cone, graph)

    def value_rows(self, x: Sequence) -> tuple:
        x = _vec(x, self.nx, "point")
        return tuple((B, c - dot(A, x)) for A, B, c in self.rows)

    def require_dual(self, zstar) -> tuple:
        return lat._dual(self.cone, zstar)


# --------------------------------------------------------------------------
# values and scalarizations


def evaluate(f: SetValuedMap, x: Sequence) -> UpperSet:
    return UpperSet.from_hpoly(HPoly(f.nz, f.value_rows(x)), f.cone, check=False)


def domain(f: SetValuedMap) -> HPoly:
    return f.domain


def in_domain(f: SetValuedMap, x: Sequence) -> bool:
    return lp.feasible_point(f.nz, f.value_rows(x)) is not None


def scalarize(f: SetValuedMap, zstar, x: Sequence) -> ExtReal:
    """``phi_{f,z*}(x) = inf{-z*.z : z in f(x)}``."""
    zs = f.require_dual(zstar)
    return lp.minimize(tuple(-v for v in zs), f.value_rows(x))


def graph_support(f: SetValuedMap, xstar: Sequence, zstar: Sequence) -> ExtReal:
    """``sup{x*.x + z*.z : (x, z) in graph f}``."""
    c = _vec(xstar, f.nx, "x*") + _vec(zstar, f.nz, "z*")
    return ph.support(f.graph, c)


def scalar_infimum(f: SetValuedMap, zstar) -> ExtReal:
    """``inf_x phi_{f,z*}(x)``."""
    zs = f.require_dual(zstar)
    return -graph_support(f, (0,) * f.nx, zs)


def recession_unbounded(f: SetValuedMap, zstar) -> bool:
    """Whether ``-z*`` is unbounded below on ``{d : B d >= 0}``.

    This cone is the recession cone of every nonempty value, so the answer
    tells whether ``phi_{f,z*} = -inf`` on the whole domain.
    """
    zs = f.require_dual(zstar)
    rows = tuple((B, _ZERO) for B in f.B)
    return lp.minimize(tuple(-v for v in zs), rows).is_minus_inf


def is_zstar_proper(f: SetValuedMap, zstar) -> bool:
    """``x -> f(x) ⊕ H(z*)`` has nonempty domain and never equals the whole space."""
    if ph.is_empty(f.domain):
        return False
    return not recession_unbounded(f, zstar)


def is_proper(f: SetValuedMap) -> bool:
    """Nonempty domain and no value equal to the whole space."""
    if ph.is_empty(f.domain):
        return False
    # a value is the whole space only if no row constrains z
    return any(any(B) for B in f.B)


def find_proper_zstar(f: SetValuedMap) -> tuple | None:
    """Some ``z*`` for which ``f`` is ``z*``-proper, or ``None``."""
    if ph.is_empty(f.domain):
        return None
    for B in f.B:
        if any(B):
            zs = tuple(-v for v in B)
            if f.cone.in_polar(zs) and not recession_unbounded(f, zs):
                return zs
    return None


# --------------------------------------------------------------------------
# directional derivative


def _dual_lp(f: SetValuedMap, zs: tuple, x0: tuple) -> lp.LinearProgram:
    """``min -(c - A x0).y  s.t.  y >= 0, B^T y = -z*``."""
    m = len(f.rows)
    b0 = tuple(c - dot(A, x0) for A, _, c in f.rows)
    ineq = tuple((tuple(Fraction(1 if j == i else 0) for j in range(m)), _ZERO) for i in range(m))
    eq = tuple((tuple(B[k] for _, B, _ in f.rows), -zs[k]) for k in range(f.nz))
    return lp.LinearProgram(tuple(-v for v in b0), ineq, eq)


def _direction_objective(f: SetValuedMap, x: tuple) -> tuple:
    return tuple(-dot(A, x) for A in f.A)


def dir_derivative(f: SetValuedMap, zstar, x0: Sequence, x: Sequence) -> HalfSpaceValue:
    """``f'_{z*}(x0, x)`` as ``{z : psi(x) + z*.z <= 0}``."""
    zs = f.require_dual(zstar)
    x0 = _vec(x0, f.nx, "x0")
    x = _vec(x, f.nx, "direction")
    phi0 = scalarize(f, zs, x0)
    if phi0.is_plus_inf:
        return HalfSpaceValue(zs, PLUS_INF)
    if phi0.is_minus_inf:
        # quotients are Z where phi(x0 + t x) = -inf, the empty set elsewhere
        return HalfSpaceValue(zs, PLUS_INF if _moves_into_domain(f, x0, x) else MINUS_INF)
    psi = lp.optimize_over_optimal_face(_dual_lp(f, zs, x0), _direction_objective(f, x))
    return HalfSpaceValue(zs, -psi)


def _moves_into_domain(f: SetValuedMap, x0: tuple, x: tuple) -> bool:
    """Is ``x0 + t x`` in the domain for some ``t`` in ``(0, 1]``?"""
    # variables (t, z): A(x0 + t x) + B z >= c, 0 <= t <= 1; maximize t
    rows = [((dot(A, x),) + B, c - dot(A, x0)) for A, B, c in f.rows]
    one = (Fraction(1),) + (_ZERO,) * f.nz
    rows.append((one, _ZERO))
    rows.append((tuple(-v for v in one), Fraction(-1)))
    best = lp.maximize(one, rows)
    return not best.is_minus_inf and best > 0


def difference_quotient(f: SetValuedMap, zstar, x0: Sequence, x: Sequence, t) -> HalfSpaceValue:
    """``(1/t) [f(x0 + t x) -_{z*} f(x0)]``."""
    t = to_rational(t)
    if t <= 0:
        raise MapError("difference quotient needs t > 0")
    zs = f.require_dual(zstar)
    x0 = _vec(x0, f.nx, "x0")
    x = _vec(x, f.nx, "direction")
    shifted = tuple(a + t * b for a, b in zip(x0, x))
    q = lat.z_residuate_value(evaluate(f, shifted), evaluate(f, x0), zs)
    return q.scaled(1 / t)


dir_derivative_quotient_oracle = difference_quotient


def derivative_domain(f: SetValuedMap, zstar, x0: Sequence) -> HPoly:
    """``{x : f'_{z*}(x0, x) != empty}`` read off the dual optimal face."""
    zs = f.require_dual(zstar)
    x0 = _vec(x0, f.nx, "x0")
    phi0 = scalarize(f, zs, x0)
    if phi0.is_plus_inf:
        return HPoly.whole(f.nx)
    if phi0.is_minus_inf:
        return ph.tangent_cone(f.domain, x0)
    face = _optimal_face(f, zs, x0, phi0.value)
    G = face.generators
    A = f.A
    rows = []
    for r in G.rays:
        rows.append((tuple(sum(A[i][k] * r[i] for i in range(len(A))) for k in range(f.nx)), _ZERO))
    for l in G.lines:
        a = tuple(sum(A[i][k] * l[i] for i in range(len(A))) for k in range(f.nx))
        rows.append((a, _ZERO))
        rows.append((tuple(-v for v in a), _ZERO))
    return HPoly(f.nx, tuple(rows))


def _optimal_face(f: SetValuedMap, zs: tuple, x0: tuple, value: Fraction) -> HPoly:
    """Dual optimal face ``{y >= 0 : B^T y = -z*, (c - A x0).y = phi(x0)}`` in y-space."""
    m = len(f.rows)
    b0 = tuple(c - dot(A, x0) for A, _, c in f.rows)
    rows = [(tuple(Fraction(1 if j == i else 0) for j in range(m)), _ZERO) for i in range(m)]
    eqs = [(tuple(B[k] for _, B, _ in f.rows), -zs[k]) for k in range(f.nz)]
    eqs.append((b0, value))
    for a, b in eqs:
        rows.append((a, b))
        rows.append((tuple(-v for v in a), -b))
    return HPoly(m, tuple(rows))


# --------------------------------------------------------------------------
# subdifferential


@dataclass(frozen=True, eq=False)
class SubdiffRep:
    """``∂_{z*} f(x0) = {-A^T y : y in F}`` for the dual optimal face ``F``.

    ``face`` is ``None`` when the subdifferential is empty.
    """

    f: SetValuedMap
    zstar: tuple
    x0: tuple
    face: HPoly | None

    @property
    def nx(self) -> int:
        return self.f.nx

    def is_empty(self) -> bool:
        return self.face is None

    def _lifted(self, objective=None, extra_eq=()):
        """LP over ``(x*, y)`` with ``x* + A^T y = 0`` and ``y`` in the face."""
        nx, m = self.nx, len(self.f.rows)
        ineq = tuple(((_ZERO,) * nx + a, b) for a, b in self.face.rows)
        A = self.f.A
        eq = [(tuple(Fraction(1 if j == k else 0) for j in range(nx)) + tuple(A[i][k] for i in range(m)), _ZERO)
              for k in range(nx)]
        eq += list(extra_eq)
        if objective is None:
            objective = (_ZERO,) * (nx + m)
        return lp.LinearProgram(tuple(objective), ineq, tuple(eq))

    def contains(self, xstar: Sequence) -> bool:
        if self.face is None:
            return False
        xs = _vec(xstar, self.nx, "x*")
        m = len(self.f.rows)
        eq = [(tuple(Fraction(1 if j == k else 0) for j in range(self.nx + m)), xs[k]) for k in range(self.nx)]
        return isinstance(lp.solve(self._lifted(extra_eq=eq)), lp.Optimal)

    def support(self, direction: Sequence) -> ExtReal:
        """``sup{x*.u : x* in ∂}``; ``-inf`` when empty."""
        if self.face is None:
            return MINUS_INF
        u = _vec(direction, self.nx, "direction")
        m = len(self.f.rows)
        return -lp.minimize(tuple(-v for v in u) + (_ZERO,) * m, self._lifted().ineq, self._lifted().eq)

    def feasible_point(self):
        if self.face is None:
            return None
        out = lp.solve(self._lifted())
        return out.x[: self.nx] if isinstance(out, lp.Optimal) else None

    @cached_property
    def generators(self) -> GeneratorRep:
        if self.face is None:
            return GeneratorRep(self.nx)
        A = self.f.A
        mat = [tuple(-A[i][k] for i in range(len(A))) for k in range(self.nx)]
        return ph.linear_image(self.face.generators, mat)

    @cached_property
    def hpoly(self) -> HPoly:
        """Explicit H-form from the generators of the dual face."""
        if self.face is None:
            return HPoly.empty(self.nx)
        return ph.from_generators(self.generators)

    def to_hpoly(self) -> HPoly:
        return self.hpoly

    def projected_fm(self) -> HPoly:
        """Explicit H-form by Fourier-Motzkin on the lifted system (independent route)."""
        if self.face is None:
            return HPoly.empty(self.nx)
        L = self._lifted()
        rows = list(L.ineq)
        for a, b in L.eq:
            rows.append((a, b))
            rows.append((tuple(-v for v in a), -b))
        return ph.project(HPoly(self.nx + len(self.f.rows), tuple(rows)), range(self.nx))

    def attaining_point(self, direction: Sequence):
        """A generating point of ``∂`` where ``x* . u`` is maximal, or ``None``."""
        if self.face is None:
            return None
        u = _vec(direction, self.nx, "direction")
        G = ph.to_generators(self.hpoly)
        if any(dot(u, r) > 0 for r in G.rays) or any(dot(u, l) != 0 for l in G.lines):
            return None
        return max(G.vertices, key=lambda v: (dot(u, v), tuple(-x for x in v)))

    def to_json(self) -> dict:
        out = {"kind": "empty"} if self.face is None else {"kind": "hrep"}
        if self.face is not None:
            out["rows"] = self.hpoly.to_json()["rows"]
        out["dim"] = self.nx
        return out


def subdifferential(f: SetValuedMap, zstar, x0: Sequence) -> SubdiffRep:
    zs = f.require_dual(zstar)
    x0 = _vec(x0, f.nx, "x0")
    phi0 = scalarize(f, zs, x0)
    if not phi0.is_finite:
        return SubdiffRep(f, zs, x0, None)
    return SubdiffRep(f, zs, x0, _optimal_face(f, zs, x0, phi0.value))


def subdiff_contains(f: SetValuedMap, zstar, x0: Sequence, xstar: Sequence) -> bool:
    return subdifferential(f, zstar, x0).contains(xstar)


# --------------------------------------------------------------------------
# conjugates


def conjugate_neg(f: SetValuedMap, xstar: Sequence, zstar) -> HalfSpaceValue:
    """``-f*(x*, z*) = {z : z*.z <= sup over the graph of x*.x + z*.z}``."""
    zs = f.require_dual(zstar)
    return HalfSpaceValue(zs, graph_support(f, xstar, zs))


def conjugate_pos(f: SetValuedMap, xstar: Sequence, zstar) -> HalfSpaceValue:
    """``f*(x*, z*) = {z : z*.z <= -sup over the graph of x*.x + z*.z}``."""
    zs = f.require_dual(zstar)
    return HalfSpaceValue(zs, -graph_support(f, xstar, zs))


# --------------------------------------------------------------------------
# inf-translation


def inf_translate(f: SetValuedMap, M: HPoly) -> SetValuedMap:
    """``x -> cl U_{m in M} f(m + x)`` for a convex polyhedron ``M``."""
    if M.dim != f.nx:
        raise ph.DimensionError("translation set lives in the wrong space")
    if ph.is_empty(M):
        raise MapError("translation set must be nonempty")
    nx, nz = f.nx, f.nz
    rows = []
    # variables (x, z, m)
    for A, B, c in f.rows:
        rows.append((A + B + A, c))
    for a, b in M.rows:
        rows.append(((_ZERO,) * (nx + nz) + a, b))
    lifted = HPoly(2 * nx + nz, tuple(rows))
    graph = ph.project(lifted, range(nx + nz))
    return SetValuedMap(nx, nz, f.cone, graph)


def inf_translate_at(f: SetValuedMap, points: Sequence[Sequence], x: Sequence) -> UpperSet:
    """``inf{f(m + x) : m in points}`` for a finite nonempty point list."""
    pts = [_vec(m, f.nx, "translation point") for m in points]
    if not pts:
        raise MapError("translation set must be nonempty")
    x = _vec(x, f.nx, "point")
    return lat.inf_family([evaluate(f, tuple(a + b for a, b in zip(m, x))) for m in pts], f.cone)


def convex_hull_points(points: Sequence[Sequence], dim: int) -> HPoly:
    pts = tuple(_vec(m, dim, "point") for m in points)
    if not pts:
        raise MapError("point list must be nonempty")
    return ph.from_generators(GeneratorRep(dim, pts))


def hpoly_of_points_or_poly(M, dim: int) -> HPoly:
    if isinstance(M, HPoly):
        return M
    return convex_hull_points(M, dim)


def S_map(xstar: Sequence, zstar: Sequence, cone: ConeSpec) -> SetValuedMap:
    """The conlinear map ``x -> {z : x*.x + z*.z <= 0}`` as a set-valued map."""
    xs = tuple(to_rational(v) for v in xstar)
    zs = cone.require_dual(zstar, allow_zero=True)
    return SetValuedMap.from_rows(len(xs), len(zs), cone, [(tuple(-v for v in xs), tuple(-v for v in zs), 0)])


def describe(f: SetValuedMap) -> str:
    lines = []
    for A, B, c in f.rows:
        lhs = " ".join(format_rational(v) for v in A) + " | " + " ".join(format_rational(v) for v in B)
        lines.append(f"[{lhs}] >= {format_rational(c)}")
    return "\n".join(lines)
