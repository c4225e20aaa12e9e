"""Seeded random instances: cones, upper sets, dual vectors and maps.

Everything is built from small integers so the exact LPs stay tiny.  Maps
are grown around a graph point ``(x0, z0)`` which is feasible by
construction, and every z-coefficient row is a nonnegative combination of
the cone's rows, so graph values are automatically upper sets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polyhedron as ph
from .extreal import dot
from .lattice import ConeSpec, UpperSet
from .polyhedron import GeneratorRep, HPoly
from .setmap import SetValuedMap

COORD = 4

CONE_KINDS = ("orthant", "generated", "zero", "halfspace")


def _ivec(rng: random.Random, n: int, lo: int = -COORD, hi: int = COORD) -> tuple:
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))


def _nonzero_ivec(rng: random.Random, n: int, lo: int = -COORD, hi: int = COORD) -> tuple:
    while True:
        v = _ivec(rng, n, lo, hi)
        if any(v):
            return v


def random_cone(rng: random.Random, dim: int, kind: str | None = None) -> ConeSpec:
    kind = kind or rng.choice(CONE_KINDS)
    if kind == "orthant":
        return ConeSpec.orthant(dim)
    if kind == "zero":
        return ConeSpec.zero(dim)
    if kind == "halfspace":
        return ConeSpec.from_rows([_nonzero_ivec(rng, dim, -2, 2)])
    # (1,...,1) is strictly positive on every ray, so the cone is pointed
    rays = []
    while len(rays) < rng.randint(1, dim + 1):
        r = _ivec(rng, dim, -2, 3)
        if sum(r) > 0:
            rays.append(r)
    return ConeSpec.from_rays(rays, dim)


def cone_plus_vector(rng: random.Random, cone: ConeSpec, allow_zero: bool = True) -> tuple:
    """A random element of ``C^+`` as a nonnegative integer combination of cone rows."""
    rows = [a for a, _ in cone.hrep.rows]
    while True:
        v = [Fraction(0)] * cone.dim
        for a in rows:
            w = rng.choice((0, 0, 1, 1, 2))
            v = [x + w * y for x, y in zip(v, a)]
        v = tuple(v)
        if allow_zero or any(v):
            return v


def random_zstar(rng: random.Random, cone: ConeSpec) -> tuple:
    """A nonzero element of ``C^-``."""
    return tuple(-v for v in cone_plus_vector(rng, cone, allow_zero=False))


def random_upper_set(rng: random.Random, cone: ConeSpec, allow_trivial: bool = True) -> UpperSet:
    roll = rng.random()
    if allow_trivial and roll < 0.08:
        return UpperSet.empty(cone)
    if allow_trivial and roll < 0.16:
        return UpperSet.ambient(cone)
    if roll < 0.3:
        zs = random_zstar(rng, cone)
        row = (tuple(-v for v in zs), Fraction(rng.randint(-COORD, COORD)))
        return UpperSet.from_hpoly(HPoly(cone.dim, (row,)), cone, check=False)
    nv = rng.randint(1, 4)
    vertices = tuple(_ivec(rng, cone.dim) for _ in range(nv))
    rays = tuple(cone_plus_vector(rng, cone, allow_zero=False) for _ in range(rng.randint(0, 6 - nv)))
    rays = tuple(r for r in rays if rng.random() < 0.3)
    return UpperSet.upper_hull(GeneratorRep(cone.dim, vertices, rays), cone)


@dataclass
class MapInstance:
    f: SetValuedMap
    x0: tuple
    z0: tuple
    zstar: tuple
    interior: bool


def random_map(rng: random.Random, nx: int | None = None, nz: int | None = None, cone: ConeSpec | None = None,
               interior: bool | None = None, proper: bool | None = None) -> MapInstance:
    """A random convex map with ``(x0, z0)`` in its graph.

    ``interior`` forces strictly positive slack on every row, which puts
    ``x0`` in the interior of the domain.  ``proper`` adds a row bounding
    ``-z*.z`` from below, which makes the map z*-proper.
    """
    nx = nx or rng.randint(1, 3)
    nz = nz or rng.randint(1, 3)
    cone = cone or random_cone(rng, nz)
    interior = rng.random() < 0.5 if interior is None else interior
    proper = rng.random() < 0.7 if proper is None else proper
    zstar = random_zstar(rng, cone)
    x0 = _ivec(rng, nx, -2, 2)
    z0 = _ivec(rng, nz, -2, 2)
    rows = []

    def add(a, b):
        lo = 1 if interior else 0
        slack = rng.randint(lo, 2)
        rows.append((a, b, dot(a, x0) + dot(b, z0) - slack))

    for _ in range(rng.randint(1, 3)):
        add(_ivec(rng, nx, -3, 3), cone_plus_vector(rng, cone, allow_zero=False))
    for _ in range(rng.randint(0, 2)):
        add(_nonzero_ivec(rng, nx, -2, 2), (Fraction(0),) * nz)
    if proper:
        add(_ivec(rng, nx, -2, 2), tuple(-v for v in zstar))
    f = SetValuedMap.from_rows(nx, nz, cone, rows)
    return MapInstance(f, x0, z0, zstar, interior)


def random_direction(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> tuple:
    return _ivec(rng, n, lo, hi)


def domain_points(rng: random.Random, f: SetValuedMap, around: Sequence, count: int) -> list[tuple]:
    """Up to ``count`` distinct integer points of ``dom f`` near ``around`` (always includes it if feasible)."""
    dom = f.domain
    around = tuple(Fraction(v) for v in around)
    out = [around] if ph.contains_point(dom, around) else []
    tries = 0
    while len(out) < count and tries < 20 * count:
        tries += 1
        p = tuple(v + rng.randint(-2, 2) for v in around)
        if p not in out and ph.contains_point(dom, p):
            out.append(p)
    return out
