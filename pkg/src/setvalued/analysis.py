"""Optimality notions for set-valued problems: infima, solutions, infimizers,
adjoint processes and coderivatives."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lattice as lat
from . import lp
from . import polyhedron as ph
from . import setmap as sm
from .extreal import MINUS_INF, PLUS_INF, ExtReal, dot, format_rational, to_rational
from .lattice import ConeSpec, UpperSet
from .polyhedron import GeneratorRep, HPoly
from .setmap import SetValuedMap

_ZERO = Fraction(0)


class AnalysisError(ValueError):
    pass


def _fmt(v):
    if isinstance(v, ExtReal):
        return str(v)
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (tuple, list)):
        return [_fmt(x) for x in v]
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    return v


@dataclass(frozen=True)
class SolutionCertificate:
    """Outcome of a solution or infimizer test with the data needed to re-check it.

    ``kind`` is one of ``zstar-solution``, ``not-solution``, ``infimizer``,
    ``not-infimizer``.
    """

    kind: str
    data: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.kind in ("zstar-solution", "infimizer")

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"kind": self.kind, "holds": self.holds, **_fmt(self.data)}


# --------------------------------------------------------------------------
# infimum and solutions


def infimum(f: SetValuedMap) -> UpperSet:
    """``I(f) = cl U_x f(x)``, the projection of the graph onto z."""
    P = ph.project(f.graph, range(f.nx, f.nx + f.nz))
    return UpperSet.from_hpoly(P, f.cone, check=False)


def gamma_minus_contains(f: SetValuedMap, zstar) -> bool:
    """``I(f) ⊕ H(z*) != Z``."""
    zs = f.require_dual(zstar)
    return not sm.graph_support(f, (0,) * f.nx, zs).is_plus_inf


def _graph_point_below(f: SetValuedMap, zs: tuple, bound: ExtReal):
    """A graph point ``(x, z)`` with ``-z*.z < bound``, or ``None``."""
    n = f.nx + f.nz
    c = (_ZERO,) * f.nx + tuple(-v for v in zs)
    out = lp.solve(lp.LinearProgram(c, f.graph.rows))
    if isinstance(out, lp.Infeasible):
        return None
    if isinstance(out, lp.Optimal):
        if bound.is_plus_inf or out.value < bound:
            return out.x
        return None
    # unbounded: walk along the ray until below the bound
    p, r = out.x, out.ray
    if bound.is_plus_inf:
        return p
    if bound.is_minus_inf:
        return None
    val, slope = dot(c, p), dot(c, r)
    t = max(_ZERO, (bound.value - val) / slope + 1)
    return tuple(a + t * b for a, b in zip(p, r))


def is_zstar_solution(f: SetValuedMap, x0: Sequence, zstar) -> SolutionCertificate:
    """``f(x0) ⊕ H(z*) = I(f) ⊕ H(z*)``, decided on the scalarization."""
    zs = f.require_dual(zstar)
    x0 = sm._vec(x0, f.nx, "x0")
    phi0 = sm.scalarize(f, zs, x0)
    best = sm.scalar_infimum(f, zs)
    data = {"zstar": zs, "x0": x0, "value": phi0, "infimum": best}
    if phi0 == best:
        return SolutionCertificate("zstar-solution", data)
    p = _graph_point_below(f, zs, phi0)
    if p is not None:
        data["witness"] = p[: f.nx]
        data["witness_value"] = sm.scalarize(f, zs, p[: f.nx])
    return SolutionCertificate("not-solution", data)


def _directions(nx: int, rng: random.Random | None, count: int = 4, extra=()) -> list[tuple]:
    dirs = []
    for i in range(nx):
        e = tuple(Fraction(1 if j == i else 0) for j in range(nx))
        dirs.append(e)
        dirs.append(tuple(-v for v in e))
    if rng is not None:
        for _ in range(count):
            d = tuple(Fraction(rng.randint(-3, 3)) for _ in range(nx))
            if any(d):
                dirs.append(d)
    dirs.extend(tuple(to_rational(v) for v in d) for d in extra)
    return dirs


def _toward_better(f: SetValuedMap, zs: tuple, x0: tuple) -> list[tuple]:
    """Direction from ``x0`` to a point with a smaller scalarization, if any."""
    phi0 = sm.scalarize(f, zs, x0)
    p = _graph_point_below(f, zs, phi0)
    if p is None:
        return []
    d = tuple(a - b for a, b in zip(p[: f.nx], x0))
    return [d] if any(d) else []


def solution_equivalences(f: SetValuedMap, x0: Sequence, zstar, directions=None, seed: int = 0):
    """The three equivalent descriptions of a ``z*``-solution, evaluated separately.

    Returns ``(a, b, c)``: (a) the defining equality, (b) ``H(z*)`` contains
    the derivative in every sampled direction, (c) ``0`` is a subgradient.
    The degenerate disjuncts (empty domain, ``f(x0) ⊕ H(z*) = Z``) count for
    (b) and (c).
    """
    zs = f.require_dual(zstar)
    x0 = sm._vec(x0, f.nx, "x0")
    a = is_zstar_solution(f, x0, zs).holds
    degenerate = ph.is_empty(f.domain) or sm.scalarize(f, zs, x0).is_minus_inf
    if directions is None:
        directions = _directions(f.nx, random.Random(seed)) + _toward_better(f, zs, x0)
    b = degenerate or all(sm.dir_derivative(f, zs, x0, d).included_in_h() for d in directions)
    c = degenerate or sm.subdiff_contains(f, zs, x0, (0,) * f.nx)
    return a, b, c


# --------------------------------------------------------------------------
# infimizers


def _as_points(M, nx: int):
    if isinstance(M, HPoly):
        if M.dim != nx:
            raise ph.DimensionError("M lives in the wrong space")
        if ph.is_empty(M):
            raise AnalysisError("M must be nonempty")
        return None
    pts = [sm._vec(m, nx, "point of M") for m in M]
    if not pts:
        raise AnalysisError("M must be nonempty")
    return pts


def inf_over(f: SetValuedMap, M) -> UpperSet:
    """``inf_{x in M} f(x)`` for a polyhedron or a finite point list."""
    pts = _as_points(M, f.nx)
    if pts is None:
        rows = list(f.graph.rows) + [(a + (_ZERO,) * f.nz, b) for a, b in M.rows]
        P = ph.project(HPoly(f.nx + f.nz, tuple(rows)), range(f.nx, f.nx + f.nz))
        return UpperSet.from_hpoly(P, f.cone, check=False)
    return lat.inf_family([sm.evaluate(f, m) for m in pts], f.cone)


def is_infimizer(f: SetValuedMap, M) -> SolutionCertificate:
    """``inf_M f = I(f)``.  A negative answer carries a row of ``inf_M f`` and a point of ``I(f)`` violating it."""
    I = infimum(f)
    got = inf_over(f, M)
    data = {"infimum": I.to_json(), "inf_over_M": got.to_json()}
    if lat.superset(got, I):
        return SolutionCertificate("infimizer", data)
    # I ⊋ got: find a row of got violated somewhere on I
    if I.is_ambient or got.is_empty:
        return SolutionCertificate("not-infimizer", data)
    for a, b in got.poly.rows:
        out = lp.solve(lp.LinearProgram(a, I.poly.rows))
        if isinstance(out, lp.Optimal) and out.value < b:
            data.update(row=list(a) + [b], point=out.x)
            break
        if isinstance(out, lp.Unbounded):
            p, r = out.x, out.ray
            t = max(_ZERO, (b - dot(a, p)) / dot(a, r) + 1)
            data.update(row=list(a) + [b], point=tuple(u + t * v for u, v in zip(p, r)))
            break
    return SolutionCertificate("not-infimizer", data)


def is_c_minus_solution(f: SetValuedMap, points: Sequence[Sequence], zstar_pool: Sequence) -> bool:
    """Finite ``M`` is an infimizer and every point is a ``z*``-solution for some pooled ``z*``."""
    if not is_infimizer(f, points).holds:
        return False
    return all(any(is_zstar_solution(f, m, zs).holds for zs in zstar_pool) for m in points)


@dataclass
class OptimalityReport:
    infimizer: bool
    shared_clause: bool
    per_zstar: list
    falsified: bool
    necessity_ok: bool

    def to_json(self) -> dict:
        return {
            "infimizer": self.infimizer,
            "shared_clause": self.shared_clause,
            "per_zstar": _fmt(self.per_zstar),
            "falsified": self.falsified,
            "necessity_ok": self.necessity_ok,
        }


def optimality_check(f: SetValuedMap, M, zstar_samples: Sequence, directions=None, seed: int = 0) -> OptimalityReport:
    """Derivative and subgradient conditions for ``M`` to be an infimizer.

    The conditions are evaluated on the inf-translation by ``co M`` at ``0``
    for each sampled ``z*`` in ``Γ^-(f)``.  Only the necessary direction is
    decidable from samples: if ``M`` is an infimizer every sampled condition
    must hold, and a failing condition refutes the infimizer property.
    """
    if not sm.is_proper(f):
        raise AnalysisError("the map must be proper")
    if infimum(f).is_ambient:
        raise AnalysisError("the infimum must not be the whole space")
    pts = _as_points(M, f.nx)
    coM = M if pts is None else sm.convex_hull_points(pts, f.nx)
    g = sm.inf_translate(f, coM)
    zero = (_ZERO,) * f.nx
    a = is_infimizer(f, M).holds
    at_M = inf_over(f, coM) if pts is None else lat.inf_family([sm.evaluate(f, m) for m in pts], f.cone)
    shared = lat.equal(at_M, sm.evaluate(g, zero))
    rng = random.Random(seed)
    per = []
    for zstar in zstar_samples:
        zs = f.require_dual(zstar)
        entry = {"zstar": zs, "in_gamma": gamma_minus_contains(f, zs)}
        if entry["in_gamma"]:
            dirs = directions
            if dirs is None:
                dirs = _directions(f.nx, rng) + _toward_better(g, zs, zero)
            entry["b"] = all(sm.dir_derivative(g, zs, zero, d).included_in_h() for d in dirs)
            entry["c"] = sm.subdiff_contains(g, zs, zero, zero)
        per.append(entry)
    failures = (not shared) or any(not e.get("b", True) or not e.get("c", True) for e in per)
    return OptimalityReport(a, shared, per, failures, (not a) or not failures)


# names used by the command line and older callers
prop55_check = solution_equivalences
thm59_check = optimality_check
Thm59Report = OptimalityReport


# --------------------------------------------------------------------------
# processes, adjoints, coderivatives


def adjoint_process(F: SetValuedMap, ustar: Sequence) -> HPoly:
    """``F^⋄(u*) = {x* : x*.x <= u*.z on graph F}`` for a conic graph."""
    if not F.is_conic:
        raise AnalysisError("adjoint processes need a conic graph")
    us = sm._vec(ustar, F.nz, "u*")
    K = ph.polar_cone(F.graph)
    # (x*, -u*) in the polar: a_x.x* + a_z.(-u*) >= 0
    rows = tuple((a[: F.nx], dot(a[F.nx:], us)) for a, _ in K.rows)
    return HPoly(F.nx, rows)


def proportional_factor(ustar: Sequence, zstar: Sequence):
    """``s >= 0`` with ``u* = -s z*``, or ``None``."""
    us = tuple(to_rational(v) for v in ustar)
    zs = tuple(to_rational(v) for v in zstar)
    k = next(i for i, v in enumerate(zs) if v != 0)
    s = -us[k] / zs[k]
    if s < 0 or any(u != -s * z for u, z in zip(us, zs)):
        return None
    return s


def adjoint_of_derivative(f: SetValuedMap, x0: Sequence, zstar, ustar: Sequence) -> HPoly:
    """Adjoint of ``x -> f'_{z*}(x0, x)`` at ``u*`` through the three-case table."""
    zs = f.require_dual(zstar)
    x0 = sm._vec(x0, f.nx, "x0")
    if not sm.in_domain(f, x0):
        raise AnalysisError("x0 must lie in the domain")
    s = proportional_factor(ustar, zs)
    if s is None:
        return HPoly.empty(f.nx)
    if s == 0:
        return ph.normal_cone(f.domain, x0)
    D = sm.subdifferential(f, zs, x0)
    if D.is_empty():
        return HPoly.empty(f.nx)
    return ph.scale(D.hpoly, s)


def derivative_process(f: SetValuedMap, zstar, x0: Sequence) -> SetValuedMap:
    """The map ``x -> f'_{z*}(x0, x)`` with a conic graph, built from the epigraph of ``phi``.

    The graph is ``{(x, z) : (x, -z*.z)`` lies in the tangent cone of
    ``epi phi`` at ``(x0, phi(x0))}``.  This route does not use the dual face.
    """
    zs = f.require_dual(zstar)
    x0 = sm._vec(x0, f.nx, "x0")
    phi0 = sm.scalarize(f, zs, x0)
    nx, nz = f.nx, f.nz
    if phi0.is_plus_inf:
        raise AnalysisError("x0 must lie in the domain")
    if phi0.is_minus_inf:
        T = ph.tangent_cone(f.domain, x0)
        rows = tuple((a + (_ZERO,) * nz, _ZERO) for a, _ in T.rows)
        return SetValuedMap(nx, nz, f.cone, HPoly(nx + nz, rows))
    # epi phi = projection onto (x, r) of {(x, z, r) : graph, -z*.z <= r}
    rows = [(a + (_ZERO,), b) for a, b in f.graph.rows]
    rows.append(((_ZERO,) * nx + zs + (Fraction(1),), _ZERO))
    keep = list(range(nx)) + [nx + nz]
    epi = ph.project(HPoly(nx + nz + 1, tuple(rows)), keep)
    T = ph.tangent_cone(epi, x0 + (phi0.value,))
    out = []
    for a, _ in T.rows:
        alpha, beta = a[:nx], a[nx]
        out.append((alpha + tuple(-beta * v for v in zs), _ZERO))
    return SetValuedMap(nx, nz, f.cone, HPoly(nx + nz, tuple(out)))


def coderivative(f: SetValuedMap, x0: Sequence, z0: Sequence, zstar: Sequence) -> HPoly:
    """``D^*f(x0, z0)(-z*)`` through the attainment case table."""
    x0 = sm._vec(x0, f.nx, "x0")
    z0 = sm._vec(z0, f.nz, "z0")
    if not ph.contains_point(f.graph, x0 + z0):
        raise AnalysisError("(x0, z0) is not in the graph")
    zs = sm._vec(zstar, f.nz, "z*")
    if not any(zs):
        return ph.normal_cone(f.domain, x0)
    if not f.cone.in_polar(zs):
        return HPoly.empty(f.nx)
    phi0 = sm.scalarize(f, zs, x0)
    if not phi0.is_finite or -dot(zs, z0) != phi0.value:
        return HPoly.empty(f.nx)
    D = sm.subdifferential(f, zs, x0)
    return D.hpoly


def coderivative_from_normal_cone(f: SetValuedMap, x0: Sequence, z0: Sequence, zstar: Sequence) -> HPoly:
    """``{x* : (x*, z*) in N_graph(x0, z0)}``, computed directly from the graph."""
    x0 = sm._vec(x0, f.nx, "x0")
    z0 = sm._vec(z0, f.nz, "z0")
    zs = sm._vec(zstar, f.nz, "z*")
    N = ph.normal_cone(f.graph, x0 + z0)
    rows = tuple((a[: f.nx], b - dot(a[f.nx:], zs)) for a, b in N.rows)
    return HPoly(f.nx, rows)
