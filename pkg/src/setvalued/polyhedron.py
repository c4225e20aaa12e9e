"""Exact polyhedral geometry over the rationals.

A polyhedron is stored in H-representation as rows ``(a, b)`` meaning
``a.z >= b``.  An empty row list is the whole space.  The generator form
(vertices, rays, lines) is computed on demand with the double description
method and cached on the instance.

Internally, rows and generators are scaled to primitive integer vectors so
that Fourier-Motzkin and double description steps run on Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

from . import lp
from .extreal import MINUS_INF, PLUS_INF, ExtReal, dot, format_rational, to_rational

_ZERO = Fraction(0)


class DimensionError(ValueError):
    pass


class GeometryError(ValueError):
    pass


# --------------------------------------------------------------------------
# integer row helpers


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _int_vector(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of ``values`` with coprime integer entries."""
    den = reduce(_lcm, (Fraction(v).denominator for v in values), 1)
    ints = [int(Fraction(v) * den) for v in values]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _prim(vec: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, vec, 0)
    if g > 1:
        return tuple(v // g for v in vec)
    return tuple(vec)


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _frac_vector(vec: Iterable[int]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in vec)


def _to_int_rows(rows) -> list[tuple[int, ...]]:
    """Rows ``(a, b)`` as integer tuples ``(*a, b)``."""
    return [_int_vector(tuple(a) + (b,)) for a, b in rows]


def _from_int_rows(rows) -> tuple:
    return tuple((_frac_vector(r[:-1]), Fraction(r[-1])) for r in rows)


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class HPoly:
    """``{z in Q^dim : a.z >= b for every row (a, b)}``."""

    dim: int
    rows: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dimension must be positive")
        rows = []
        for a, b in self.rows:
            a = tuple(to_rational(v) for v in a)
            if len(a) != self.dim:
                raise DimensionError(f"row of length {len(a)} in a polyhedron of dimension {self.dim}")
            rows.append((a, to_rational(b)))
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def whole(cls, dim: int) -> "HPoly":
        return cls(dim, ())

    @classmethod
    def empty(cls, dim: int) -> "HPoly":
        return cls(dim, (((_ZERO,) * dim, Fraction(1)),))

    @classmethod
    def point(cls, z: Sequence) -> "HPoly":
        z = tuple(to_rational(v) for v in z)
        n = len(z)
        rows = []
        for i in range(n):
            e = tuple(Fraction(1 if j == i else 0) for j in range(n))
            rows.append((e, z[i]))
            rows.append((tuple(-v for v in e), -z[i]))
        return cls(n, tuple(rows))

    @classmethod
    def nonneg_orthant(cls, dim: int) -> "HPoly":
        return cls(dim, tuple((tuple(Fraction(1 if j == i else 0) for j in range(dim)), _ZERO)
                              for i in range(dim)))

    def __len__(self):
        return len(self.rows)

    @property
    def is_homogeneous(self) -> bool:
        return all(b == 0 for _, b in self.rows)

    def contains(self, z: Sequence) -> bool:
        return contains_point(self, z)

    @cached_property
    def generators(self) -> "GeneratorRep":
        return _to_generators(self)

    @cached_property
    def empty_flag(self) -> bool:
        return lp.feasible_point(self.dim, self.rows) is None

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rows": [[format_rational(v) for v in a] + [format_rational(b)] for a, b in canonical_rows(self)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HPoly":
        dim = int(obj["dim"])
        rows = []
        for r in obj.get("rows", []):
            if len(r) != dim + 1:
                raise DimensionError(f"row {r!r} does not have {dim} + 1 entries")
            vals = [to_rational(v) for v in r]
            rows.append((tuple(vals[:-1]), vals[-1]))
        return cls(dim, tuple(rows))


@dataclass(frozen=True)
class GeneratorRep:
    """``conv(vertices) + cone(rays) + span(lines)``; empty iff no vertices."""

    dim: int
    vertices: tuple = ()
    rays: tuple = ()
    lines: tuple = ()

    def __post_init__(self):
        for name in ("vertices", "rays", "lines"):
            vecs = tuple(tuple(to_rational(v) for v in vec) for vec in getattr(self, name))
            for vec in vecs:
                if len(vec) != self.dim:
                    raise DimensionError(f"{name} entry of length {len(vec)} in dimension {self.dim}")
            object.__setattr__(self, name, vecs)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def to_json(self) -> dict:
        fmt = lambda vs: [[format_rational(v) for v in vec] for vec in vs]  # noqa: E731
        return {"dim": self.dim, "vertices": fmt(self.vertices), "rays": fmt(self.rays),
                "lines": fmt(self.lines)}


def _check_dim(P: HPoly, n: int, what: str = "point"):
    if P.dim != n:
        raise DimensionError(f"{what} has dimension {n}, polyhedron has {P.dim}")


# --------------------------------------------------------------------------
# LP-backed queries


def is_empty(P: HPoly) -> bool:
    return P.empty_flag


def contains_point(P: HPoly, z: Sequence) -> bool:
    z = tuple(to_rational(v) for v in z)
    _check_dim(P, len(z))
    return all(dot(a, z) >= b for a, b in P.rows)


def support(P: HPoly, c: Sequence) -> ExtReal:
    """``sup{c.z : z in P}``; ``-inf`` for empty ``P``."""
    c = tuple(to_rational(v) for v in c)
    _check_dim(P, len(c), "direction")
    if not any(c):
        return MINUS_INF if is_empty(P) else ExtReal(_ZERO)
    return lp.maximize(c, P.rows)


def infimum_of(P: HPoly, c: Sequence) -> ExtReal:
    """``inf{c.z : z in P}``; ``+inf`` for empty ``P``."""
    return -support(P, tuple(-to_rational(v) for v in c))


def poly_subset(P: HPoly, Q: HPoly) -> bool:
    """``P ⊆ Q`` decided row by row on ``Q``."""
    if P.dim != Q.dim:
        raise DimensionError(f"dimensions {P.dim} and {Q.dim} differ")
    if not Q.rows:
        return True
    if is_empty(P):
        return True
    for a, b in Q.rows:
        if not any(a):
            if b > 0:
                return False
            continue
        if infimum_of(P, a) < b:
            return False
    return True


def poly_equal(P: HPoly, Q: HPoly) -> bool:
    return poly_subset(P, Q) and poly_subset(Q, P)


def feasible_point(P: HPoly):
    return lp.feasible_point(P.dim, P.rows)


# --------------------------------------------------------------------------
# elementary constructions


def intersect(*polys: HPoly) -> HPoly:
    if not polys:
        raise ValueError("intersect needs at least one polyhedron")
    dim = polys[0].dim
    rows = []
    for P in polys:
        if P.dim != dim:
            raise DimensionError("dimension mismatch in intersection")
        rows.extend(P.rows)
    return HPoly(dim, tuple(rows))


def translate(P: HPoly, v: Sequence) -> HPoly:
    """``P + v``."""
    v = tuple(to_rational(x) for x in v)
    _check_dim(P, len(v))
    return HPoly(P.dim, tuple((a, b + dot(a, v)) for a, b in P.rows))


def scale(P: HPoly, t) -> HPoly:
    """``t P`` for ``t > 0``."""
    t = to_rational(t)
    if t <= 0:
        raise ValueError("scale factor must be positive")
    return HPoly(P.dim, tuple((a, b * t) for a, b in P.rows))


def product(P: HPoly, Q: HPoly) -> HPoly:
    rows = [(a + (_ZERO,) * Q.dim, b) for a, b in P.rows]
    rows += [((_ZERO,) * P.dim + a, b) for a, b in Q.rows]
    return HPoly(P.dim + Q.dim, tuple(rows))


def recession_cone(P: HPoly) -> HPoly:
    return HPoly(P.dim, tuple((a, _ZERO) for a, _ in P.rows))


def tangent_cone(P: HPoly, x0: Sequence) -> HPoly:
    """``cone(P - x0)`` for ``x0`` in ``P``: the rows active at ``x0``."""
    x0 = tuple(to_rational(v) for v in x0)
    if not contains_point(P, x0):
        raise GeometryError("point is not in the polyhedron")
    return HPoly(P.dim, tuple((a, _ZERO) for a, b in P.rows if dot(a, x0) == b))


# --------------------------------------------------------------------------
# canonical form


def _prune_int_rows(rows, dim):
    """Drop rows implied by the others (LP test).  Input must be feasible."""
    keep = list(rows)
    i = 0
    while i < len(keep):
        r = keep[i]
        others = keep[:i] + keep[i + 1:]
        a = _frac_vector(r[:-1])
        if others:
            val = lp.minimize(a, _from_int_rows(others))
        else:
            val = MINUS_INF
        if val >= Fraction(r[-1]):
            keep.pop(i)
        else:
            i += 1
    return keep


def _normalize_rows(rows, dim):
    """Integer rows with primitive normals; ``None`` if trivially infeasible."""
    best: dict[tuple[int, ...], Fraction] = {}
    for r in rows:
        a, b = r[:-1], r[-1]
        g = reduce(gcd, a, 0)
        if g == 0:
            if b > 0:
                return None
            continue
        a = tuple(v // g for v in a)
        bound = Fraction(b, g)
        if a not in best or bound > best[a]:
            best[a] = bound
    return [_int_vector(_frac_vector(a) + (bnd,)) for a, bnd in best.items()]


def _sort_key(r):
    return tuple(-v for v in r)


def canonical(P: HPoly) -> HPoly:
    """Irredundant, normalized, sorted representation of the same set."""
    rows = _normalize_rows(_to_int_rows(P.rows), P.dim)
    if rows is None or is_empty(P):
        return HPoly.empty(P.dim)
    rows = sorted(rows, key=_sort_key)
    rows = _prune_int_rows(rows, P.dim)
    return HPoly(P.dim, _from_int_rows(rows))


def canonical_rows(P: HPoly) -> tuple:
    """Rows normalized to coprime integers and sorted (no LP pruning)."""
    rows = _normalize_rows(_to_int_rows(P.rows), P.dim)
    if rows is None:
        return HPoly.empty(P.dim).rows
    return _from_int_rows(sorted(rows, key=_sort_key))


# --------------------------------------------------------------------------
# Fourier-Motzkin projection


def _eliminate(rows, k):
    """Eliminate column ``k`` from integer rows ``(*a, b)``."""
    # exact equality pair available?
    rowset = set(rows)
    for r in rows:
        if r[k] != 0:
            neg = tuple(-v for v in r)
            if neg in rowset:
                e = r
                ek = e[k]
                s_e = 1 if ek > 0 else -1
                out = []
                for s in rows:
                    if s == e or s == neg:
                        continue
                    if s[k] == 0:
                        out.append(s)
                    else:
                        out.append(_prim(tuple(abs(ek) * x - s_e * s[k] * y for x, y in zip(s, e))))
                return [tuple(v for j, v in enumerate(s) if j != k) for s in out]
    pos = [r for r in rows if r[k] > 0]
    neg = [r for r in rows if r[k] < 0]
    out = [r for r in rows if r[k] == 0]
    for p in pos:
        for q in neg:
            out.append(_prim(tuple(-q[k] * x + p[k] * y for x, y in zip(p, q))))
    return [tuple(v for j, v in enumerate(s) if j != k) for s in out]


def _choice_cost(rows, k):
    rowset = set(rows)
    for r in rows:
        if r[k] != 0 and tuple(-v for v in r) in rowset:
            return -1
    p = sum(1 for r in rows if r[k] > 0)
    n = sum(1 for r in rows if r[k] < 0)
    return p * n - p - n


def project(P: HPoly, keep: Sequence[int]) -> HPoly:
    """Projection onto the coordinates ``keep`` (in that order).

    Fourier-Motzkin elimination of the other coordinates, with equality
    substitution when an exact equality pair is present and LP redundancy
    pruning after every step.
    """
    keep = [int(k) for k in keep]
    if not keep:
        raise GeometryError("projection onto an empty coordinate set")
    if len(set(keep)) != len(keep) or any(k < 0 or k >= P.dim for k in keep):
        raise GeometryError(f"bad coordinate selection {keep!r}")
    if is_empty(P):
        return HPoly.empty(len(keep))
    # reorder columns: kept coordinates first
    drop = [j for j in range(P.dim) if j not in keep]
    order = keep + drop
    rows = [tuple(r[j] for j in order) + (r[-1],) for r in _to_int_rows(P.rows)]
    rows = _normalize_rows(rows, P.dim)
    ncols = P.dim
    while ncols > len(keep):
        cands = range(len(keep), ncols)
        k = min(cands, key=lambda j: (_choice_cost(rows, j), j))
        rows = _eliminate(rows, k)
        ncols -= 1
        rows = _normalize_rows(rows, ncols)
        if rows is None:
            raise GeometryError("projection of a feasible system became infeasible")
        rows = _prune_int_rows(sorted(rows, key=_sort_key), ncols)
    return HPoly(len(keep), _from_int_rows(sorted(rows, key=_sort_key)))


# --------------------------------------------------------------------------
# double description


def _dd(rows: list[tuple[int, ...]], d: int):
    """Extreme rays and a lineality basis of ``{x : r.x >= 0 for r in rows}``."""
    lines = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    rays: list[tuple[tuple[int, ...], int]] = []
    for idx, r in enumerate(rows):
        bit = 1 << idx
        piv = next((li for li, l in enumerate(lines) if _idot(r, l) != 0), None)
        if piv is not None:
            l = lines.pop(piv)
            rl = _idot(r, l)
            if rl < 0:
                l = tuple(-v for v in l)
                rl = -rl
            new_lines = []
            for l2 in lines:
                v = _idot(r, l2)
                if v:
                    l2 = _prim(tuple(rl * a - v * b for a, b in zip(l2, l)))
                new_lines.append(l2)
            lines = new_lines
            new_rays = []
            for vec, z in rays:
                v = _idot(r, vec)
                if v:
                    vec = _prim(tuple(rl * a - v * b for a, b in zip(vec, l)))
                new_rays.append((vec, z | bit))
            new_rays.append((_prim(l), bit - 1))
            rays = new_rays
            continue
        pos, neg, zero = [], [], []
        for vec, z in rays:
            v = _idot(r, vec)
            if v > 0:
                pos.append((vec, z, v))
            elif v < 0:
                neg.append((vec, z, v))
            else:
                zero.append((vec, z, v))
        if not neg:
            rays = [(vec, z) for vec, z, _ in pos] + [(vec, z | bit) for vec, z, _ in zero]
            continue
        need = d - len(lines) - 2
        everyone = pos + neg + zero
        created = []
        for p in pos:
            for q in neg:
                common = p[1] & q[1]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for o in everyone:
                    if o is p or o is q:
                        continue
                    if o[1] & common == common:
                        adjacent = False
                        break
                if adjacent:
                    vec = _prim(tuple(p[2] * b - q[2] * a for a, b in zip(p[0], q[0])))
                    created.append((vec, common | bit))
        rays = [(vec, z) for vec, z, _ in pos] + [(vec, z | bit) for vec, z, _ in zero] + created
    return [vec for vec, _ in rays], lines


def _to_generators(P: HPoly) -> GeneratorRep:
    n = P.dim
    rows = [(0,) * n + (1,)]
    for r in _to_int_rows(P.rows):
        rows.append(r[:-1] + (-r[-1],))
    rays, lines = _dd(rows, n + 1)
    vertices, directions = [], []
    for vec in rays:
        t = vec[-1]
        if t > 0:
            vertices.append(tuple(Fraction(v, t) for v in vec[:-1]))
        else:
            directions.append(_frac_vector(vec[:-1]))
    if not vertices:
        return GeneratorRep(n)
    return GeneratorRep(n, tuple(sorted(vertices)), tuple(sorted(directions)),
                        tuple(sorted(_frac_vector(l[:-1]) for l in lines)))


def to_generators(P: HPoly) -> GeneratorRep:
    return P.generators


def from_generators(G: GeneratorRep) -> HPoly:
    """H-representation of ``conv(V) + cone(R) + span(L)``."""
    n = G.dim
    if G.is_empty:
        return HPoly.empty(n)
    rows = []
    for v in G.vertices:
        rows.append(_int_vector(tuple(v) + (Fraction(1),)))
    for r in G.rays:
        rows.append(_int_vector(tuple(r) + (_ZERO,)))
    for l in G.lines:
        li = _int_vector(tuple(l) + (_ZERO,))
        rows.append(li)
        rows.append(tuple(-v for v in li))
    rays, lines = _dd(rows, n + 1)
    out = []
    for vec in rays:
        if any(vec[:-1]):
            out.append(vec[:-1] + (-vec[-1],))
    for vec in lines:
        if any(vec[:-1]):
            out.append(vec[:-1] + (-vec[-1],))
            out.append(tuple(-v for v in vec[:-1]) + (vec[-1],))
    out = _normalize_rows(out, n) or []
    return HPoly(n, _from_int_rows(sorted(out, key=_sort_key)))


# --------------------------------------------------------------------------
# sums, hulls, cones


def minkowski_sum(P: HPoly, Q: HPoly) -> HPoly:
    """``P + Q`` by projecting ``{(z, u) : u in P, z - u in Q}`` onto ``z``."""
    if P.dim != Q.dim:
        raise DimensionError("dimension mismatch in Minkowski sum")
    n = P.dim
    rows = [((_ZERO,) * n + a, b) for a, b in P.rows]
    rows += [(a + tuple(-v for v in a), b) for a, b in Q.rows]
    return project(HPoly(2 * n, tuple(rows)), range(n))


def generator_sum(P: HPoly, Q: HPoly) -> HPoly:
    """``P + Q`` from generators: pairwise vertex sums, union of rays and lines."""
    if P.dim != Q.dim:
        raise DimensionError("dimension mismatch in Minkowski sum")
    G, H = P.generators, Q.generators
    if G.is_empty or H.is_empty:
        return HPoly.empty(P.dim)
    verts = sorted({tuple(a + b for a, b in zip(u, v)) for u in G.vertices for v in H.vertices})
    return from_generators(GeneratorRep(P.dim, tuple(verts), G.rays + H.rays, G.lines + H.lines))


def hull_union(reps: Sequence[GeneratorRep], dim: int | None = None) -> HPoly:
    """Closed convex hull of a finite union given by generators."""
    if dim is None:
        if not reps:
            raise ValueError("dimension required for an empty family")
        dim = reps[0].dim
    verts, rays, lines = [], [], []
    for G in reps:
        if G.dim != dim:
            raise DimensionError("dimension mismatch in hull")
        if G.is_empty:
            continue
        verts += G.vertices
        rays += G.rays
        lines += G.lines
    return from_generators(GeneratorRep(dim, tuple(verts), tuple(rays), tuple(lines)))


def linear_image(G: GeneratorRep, matrix: Sequence[Sequence[Fraction]]) -> GeneratorRep:
    """Image of a generator representation under ``v -> matrix v``."""
    m = len(matrix)
    apply = lambda v: tuple(dot(row, v) for row in matrix)  # noqa: E731
    if G.is_empty:
        return GeneratorRep(m)
    return GeneratorRep(m, tuple(apply(v) for v in G.vertices), tuple(apply(r) for r in G.rays),
                        tuple(apply(l) for l in G.lines))


def project_generators(P: HPoly, keep: Sequence[int]) -> HPoly:
    """Projection computed from generators (independent of Fourier-Motzkin)."""
    keep = list(keep)
    mat = [tuple(Fraction(1 if j == k else 0) for j in range(P.dim)) for k in keep]
    return from_generators(linear_image(P.generators, mat))


def polar_cone(K: HPoly) -> HPoly:
    """``K° = {y : y.z <= 0 for all z in K}`` for a homogeneous ``K``."""
    if not K.is_homogeneous:
        raise GeometryError("polar_cone needs a homogeneous system (all b = 0)")
    G = K.generators
    rows = [(tuple(-v for v in r), _ZERO) for r in G.rays]
    for l in G.lines:
        rows.append((tuple(l), _ZERO))
        rows.append((tuple(-v for v in l), _ZERO))
    return HPoly(K.dim, tuple(rows))


def normal_cone(P: HPoly, x0: Sequence) -> HPoly:
    """``(cone(P - x0))°``, generated by the negated active normals."""
    x0 = tuple(to_rational(v) for v in x0)
    _check_dim(P, len(x0))
    if not contains_point(P, x0):
        raise GeometryError("normal cone requested at a point outside the polyhedron")
    active = [tuple(-v for v in a) for a, b in P.rows if dot(a, x0) == b and any(a)]
    return from_generators(GeneratorRep(P.dim, ((_ZERO,) * P.dim,), tuple(active)))
