"""Upper-closed polyhedra ordered by reverse inclusion.

Elements of the lattice are closed convex sets ``A`` with ``A + C = A`` for
a fixed convex cone ``C``.  The empty set is the top element, the whole
space the bottom.  Addition is the closed Minkowski sum, the lattice
infimum is the closed convex hull of the union, the supremum is the
intersection.

Every operation first resolves the two extreme elements with an explicit
case table and only then does polyhedral arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import polyhedron as ph
from .extreal import MINUS_INF, PLUS_INF, ExtReal, dot, format_rational, to_rational
from .polyhedron import GeneratorRep, HPoly

_ZERO = Fraction(0)

EMPTY = "empty"
AMBIENT = "ambient"
POLY = "poly"


class LatticeError(ValueError):
    pass


class ConeMismatch(LatticeError):
    pass


class InvalidDualVector(LatticeError):
    pass


class NotUpperSet(LatticeError):
    pass


# --------------------------------------------------------------------------
# the ordering cone


@dataclass(frozen=True)
class ConeSpec:
    """A polyhedral convex cone ``C = {z : a.z >= 0}`` different from the whole space."""

    dim: int
    hrep: HPoly

    def __post_init__(self):
        if self.hrep.dim != self.dim:
            raise ph.DimensionError("cone dimension does not match its rows")
        if not self.hrep.is_homogeneous:
            raise LatticeError("cone rows must have right-hand side 0")
        rows = ph.canonical_rows(self.hrep)
        if not any(any(a) for a, _ in rows):
            raise LatticeError("the ordering cone must not be the whole space")
        object.__setattr__(self, "hrep", HPoly(self.dim, rows))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> "ConeSpec":
        rows = [tuple(to_rational(v) for v in r) for r in rows]
        if not rows:
            raise LatticeError("the ordering cone must not be the whole space")
        n = len(rows[0])
        return cls(n, HPoly(n, tuple((r, _ZERO) for r in rows)))

    @classmethod
    def orthant(cls, dim: int) -> "ConeSpec":
        return cls(dim, HPoly.nonneg_orthant(dim))

    @classmethod
    def zero(cls, dim: int) -> "ConeSpec":
        """``C = {0}``."""
        rows = []
        for i in range(dim):
            e = tuple(Fraction(1 if j == i else 0) for j in range(dim))
            rows.append((e, _ZERO))
            rows.append((tuple(-v for v in e), _ZERO))
        return cls(dim, HPoly(dim, tuple(rows)))

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence], dim: int | None = None) -> "ConeSpec":
        rays = tuple(tuple(to_rational(v) for v in r) for r in rays)
        if dim is None:
            dim = len(rays[0])
        P = ph.from_generators(GeneratorRep(dim, ((_ZERO,) * dim,), rays))
        return cls(dim, HPoly(dim, tuple((a, _ZERO) for a, _ in P.rows)))

    @property
    def poly(self) -> HPoly:
        return self.hrep

    @property
    def generators(self) -> GeneratorRep:
        return self.hrep.generators

    def contains(self, z: Sequence) -> bool:
        return ph.contains_point(self.hrep, z)

    def in_polar(self, zstar: Sequence) -> bool:
        """``z* in C^- = {z* : z*.z <= 0 for z in C}`` (zero included)."""
        zstar = tuple(to_rational(v) for v in zstar)
        if len(zstar) != self.dim:
            raise ph.DimensionError(f"dual vector of length {len(zstar)} for a cone in dimension {self.dim}")
        return ph.support(self.hrep, zstar) <= 0

    def require_dual(self, zstar: Sequence, allow_zero: bool = False) -> tuple:
        """Validate ``z* in C^- \\ {0}`` and return it as a rational tuple."""
        try:
            zs = tuple(to_rational(v) for v in zstar)
        except (TypeError, ValueError) as exc:
            raise InvalidDualVector(str(exc)) from exc
        if len(zs) != self.dim:
            raise InvalidDualVector(f"dual vector has length {len(zs)}, expected {self.dim}")
        if not allow_zero and not any(zs):
            raise InvalidDualVector("dual vector must be nonzero")
        if not self.in_polar(zs):
            raise InvalidDualVector(f"{[format_rational(v) for v in zs]} is not in the negative dual cone")
        return zs

    def same_as(self, other: "ConeSpec") -> bool:
        if self is other or self == other:
            return True
        return self.dim == other.dim and ph.poly_equal(self.hrep, other.hrep)

    def to_json(self) -> dict:
        return self.hrep.to_json()

    @classmethod
    def from_json(cls, obj: dict) -> "ConeSpec":
        P = HPoly.from_json(obj)
        return cls(P.dim, P)


@dataclass(frozen=True)
class DualVector:
    """A validated element of ``C^- \\ {0}``."""

    zstar: tuple
    cone: ConeSpec

    def __post_init__(self):
        object.__setattr__(self, "zstar", self.cone.require_dual(self.zstar))


def _dual(cone: ConeSpec, zstar) -> tuple:
    if isinstance(zstar, DualVector):
        if not zstar.cone.same_as(cone):
            raise ConeMismatch("dual vector belongs to a different cone")
        return zstar.zstar
    return cone.require_dual(zstar)


# --------------------------------------------------------------------------
# upper sets


@dataclass(frozen=True, eq=False)
class UpperSet:
    """An element of the lattice: empty, the whole space, or a proper polyhedron.

    Build instances with :meth:`empty`, :meth:`ambient` or :meth:`from_hpoly`;
    the latter tags degenerate polyhedra and checks upper-closedness.
    """

    kind: str
    cone: ConeSpec
    poly: HPoly | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def empty(cls, cone: ConeSpec) -> "UpperSet":
        return cls(EMPTY, cone)

    @classmethod
    def ambient(cls, cone: ConeSpec) -> "UpperSet":
        return cls(AMBIENT, cone)

    @classmethod
    def from_hpoly(cls, P: HPoly, cone: ConeSpec, check: bool = True) -> "UpperSet":
        if P.dim != cone.dim:
            raise ph.DimensionError(f"set of dimension {P.dim} for a cone of dimension {cone.dim}")
        P = ph.canonical(P)
        if ph.is_empty(P):
            return cls.empty(cone)
        if not P.rows:
            return cls.ambient(cone)
        if check and not ph.poly_subset(cone.hrep, ph.recession_cone(P)):
            raise NotUpperSet("set is not closed under adding the ordering cone")
        return cls(POLY, cone, P)

    @classmethod
    def from_generators(cls, G: GeneratorRep, cone: ConeSpec, check: bool = True) -> "UpperSet":
        return cls.from_hpoly(ph.from_generators(G), cone, check)

    @classmethod
    def upper_hull(cls, G: GeneratorRep, cone: ConeSpec) -> "UpperSet":
        """Smallest upper set containing the generated set: ``conv V + cone R + C``."""
        if G.is_empty:
            return cls.empty(cone)
        Cg = cone.generators
        return cls.from_generators(GeneratorRep(G.dim, G.vertices, G.rays + Cg.rays, G.lines + Cg.lines),
                                   cone, check=False)

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY

    @property
    def is_ambient(self) -> bool:
        return self.kind == AMBIENT

    @property
    def is_proper(self) -> bool:
        return self.kind == POLY

    def as_hpoly(self) -> HPoly:
        if self.kind == EMPTY:
            return HPoly.empty(self.dim)
        if self.kind == AMBIENT:
            return HPoly.whole(self.dim)
        return self.poly

    @property
    def generators(self) -> GeneratorRep:
        return self.as_hpoly().generators

    def contains(self, z: Sequence) -> bool:
        if self.kind == EMPTY:
            return False
        if self.kind == AMBIENT:
            return True
        return ph.contains_point(self.poly, z)

    def support(self, zstar: Sequence) -> ExtReal:
        """``sup{z*.z : z in A}``."""
        key = tuple(to_rational(v) for v in zstar)
        if key not in self._cache:
            if self.kind == EMPTY:
                val = MINUS_INF
            elif self.kind == AMBIENT:
                val = PLUS_INF if any(key) else ExtReal(_ZERO)
            else:
                val = ph.support(self.poly, key)
            self._cache[key] = val
        return self._cache[key]

    def to_json(self) -> dict:
        if self.kind == EMPTY:
            return {"kind": "empty"}
        if self.kind == AMBIENT:
            return {"kind": "ambient"}
        return {"kind": "hrep", "rows": self.poly.to_json()["rows"]}

    @classmethod
    def from_json(cls, obj: dict, cone: ConeSpec) -> "UpperSet":
        kind = obj.get("kind")
        if kind == "empty":
            return cls.empty(cone)
        if kind == "ambient":
            return cls.ambient(cone)
        if kind == "hrep":
            return cls.from_hpoly(HPoly.from_json({"dim": cone.dim, "rows": obj.get("rows", [])}), cone)
        raise LatticeError(f"unknown set kind {kind!r}")

    def __repr__(self):
        if self.kind != POLY:
            return f"UpperSet({self.kind})"
        rows = ", ".join(
            "(" + " ".join(format_rational(v) for v in a) + f" | {format_rational(b)})" for a, b in self.poly.rows
        )
        return f"UpperSet({rows})"


def _same_cone(*sets: UpperSet) -> ConeSpec:
    cone = sets[0].cone
    for S in sets[1:]:
        if not S.cone.same_as(cone):
            raise ConeMismatch("upper sets are taken with respect to different cones")
    return cone


# --------------------------------------------------------------------------
# order


def superset(A: UpperSet, B: UpperSet) -> bool:
    """``A ⊇ B``, i.e. ``A <= B`` in the lattice order."""
    _same_cone(A, B)
    if B.is_empty or A.is_ambient:
        return True
    if A.is_empty or B.is_ambient:
        return False
    return ph.poly_subset(B.poly, A.poly)


def equal(A: UpperSet, B: UpperSet) -> bool:
    return superset(A, B) and superset(B, A)


def cone_element(cone: ConeSpec) -> UpperSet:
    """``cl C`` as an upper set, the neutral element of addition."""
    return UpperSet.from_hpoly(cone.hrep, cone, check=False)


# --------------------------------------------------------------------------
# algebra


def oplus(A: UpperSet, B: UpperSet) -> UpperSet:
    """Closed Minkowski sum; the empty set absorbs."""
    cone = _same_cone(A, B)
    if A.is_empty or B.is_empty:
        return UpperSet.empty(cone)
    if A.is_ambient or B.is_ambient:
        return UpperSet.ambient(cone)
    return UpperSet.from_hpoly(ph.generator_sum(A.poly, B.poly), cone, check=False)


def scale(t, A: UpperSet) -> UpperSet:
    """``t . A`` with ``0 . A = cl C`` for every ``A`` (the empty set included)."""
    t = to_rational(t)
    if t < 0:
        raise LatticeError("scalar must be nonnegative")
    if t == 0:
        return cone_element(A.cone)
    if A.kind != POLY:
        return A
    return UpperSet(POLY, A.cone, ph.canonical(ph.scale(A.poly, t)))


def inf_family(sets: Sequence[UpperSet], cone: ConeSpec | None = None) -> UpperSet:
    """Closed convex hull of the union; the empty family gives the empty set."""
    sets = list(sets)
    if cone is None:
        if not sets:
            raise LatticeError("cone required for an empty family")
        cone = sets[0].cone
    if sets:
        _same_cone(*sets, UpperSet.empty(cone))
    members = [S for S in sets if not S.is_empty]
    if not members:
        return UpperSet.empty(cone)
    if any(S.is_ambient for S in members):
        return UpperSet.ambient(cone)
    if len(members) == 1:
        return members[0]
    return UpperSet.from_hpoly(ph.hull_union([S.poly.generators for S in members], cone.dim), cone, check=False)


def sup_family(sets: Sequence[UpperSet], cone: ConeSpec | None = None) -> UpperSet:
    """Intersection; the empty family gives the whole space."""
    sets = list(sets)
    if cone is None:
        if not sets:
            raise LatticeError("cone required for an empty family")
        cone = sets[0].cone
    if sets:
        _same_cone(*sets, UpperSet.empty(cone))
    if any(S.is_empty for S in sets):
        return UpperSet.empty(cone)
    polys = [S.poly for S in sets if S.kind == POLY]
    if not polys:
        return UpperSet.ambient(cone)
    return UpperSet.from_hpoly(ph.intersect(*polys), cone, check=False)


def residuate(A: UpperSet, B: UpperSet) -> UpperSet:
    """``A -. B = {z : B + z ⊆ A}``, computed facet by facet on ``A``."""
    cone = _same_cone(A, B)
    if B.is_empty or A.is_ambient:
        return UpperSet.ambient(cone)
    if A.is_empty:
        return UpperSet.empty(cone)
    rows = []
    for a, b in A.poly.rows:
        low = -B.support(tuple(-v for v in a))
        if low.is_minus_inf:
            return UpperSet.empty(cone)
        rows.append((a, b - low.value))
    return UpperSet.from_hpoly(HPoly(cone.dim, tuple(rows)), cone, check=False)


# --------------------------------------------------------------------------
# half-spaces with a fixed normal


@dataclass(frozen=True)
class HalfSpaceValue:
    """``{z : z*.z <= level}``; ``+inf`` is the whole space, ``-inf`` the empty set."""

    zstar: tuple
    level: ExtReal

    def __post_init__(self):
        object.__setattr__(self, "zstar", tuple(to_rational(v) for v in self.zstar))
        object.__setattr__(self, "level", ExtReal.of(self.level))

    @property
    def is_empty(self) -> bool:
        return self.level.is_minus_inf

    @property
    def is_ambient(self) -> bool:
        return self.level.is_plus_inf

    def scaled(self, t) -> "HalfSpaceValue":
        return HalfSpaceValue(self.zstar, self.level.scale(t))

    def contains(self, z: Sequence) -> bool:
        if self.level.is_finite:
            return dot(self.zstar, tuple(to_rational(v) for v in z)) <= self.level.value
        return self.level.is_plus_inf

    def included_in_h(self) -> bool:
        """``H(z*) ⊇ self``."""
        return self.level <= 0

    def to_upper(self, cone: ConeSpec) -> UpperSet:
        if self.level.is_plus_inf:
            return UpperSet.ambient(cone)
        if self.level.is_minus_inf:
            return UpperSet.empty(cone)
        row = (tuple(-v for v in self.zstar), -self.level.value)
        return UpperSet.from_hpoly(HPoly(cone.dim, (row,)), cone, check=False)

    @classmethod
    def from_upper(cls, A: UpperSet, zstar: Sequence) -> "HalfSpaceValue":
        """Read ``A`` as a half-space with normal ``z*``; raises if it is not one."""
        zstar = tuple(to_rational(v) for v in zstar)
        if A.is_empty:
            return cls(zstar, MINUS_INF)
        if A.is_ambient:
            return cls(zstar, PLUS_INF)
        level = A.support(zstar)
        if not level.is_finite or not equal(A, cls(zstar, level).to_upper(A.cone)):
            raise LatticeError("set is not a half-space with the given normal")
        return cls(zstar, level)

    def to_json(self) -> dict:
        out = {"kind": "empty"} if self.is_empty else {"kind": "ambient"} if self.is_ambient else None
        if out is None:
            a = tuple(-v for v in self.zstar)
            row = ph.canonical_rows(HPoly(len(a), ((a, -self.level.value),)))
            out = {"kind": "hrep", "rows": [[format_rational(v) for v in r] + [format_rational(b)] for r, b in row]}
        out["zstar"] = [format_rational(v) for v in self.zstar]
        out["level"] = str(self.level)
        return out


def halfspace(zstar, cone: ConeSpec) -> UpperSet:
    """``H(z*) = {z : z*.z <= 0}``."""
    zs = _dual(cone, zstar)
    return HalfSpaceValue(zs, ExtReal(_ZERO)).to_upper(cone)


def oplus_halfspace(A: UpperSet, zstar) -> HalfSpaceValue:
    """``A ⊕ H(z*)`` from a single support computation."""
    zs = _dual(A.cone, zstar)
    return HalfSpaceValue(zs, A.support(zs))


def z_residuate_value(A: UpperSet, B: UpperSet, zstar) -> HalfSpaceValue:
    """``A -_{z*} B = (A ⊕ H(z*)) -. B`` as a half-space value."""
    _same_cone(A, B)
    zs = _dual(A.cone, zstar)
    sa, sb = A.support(zs), B.support(zs)
    if sa.is_plus_inf or B.is_empty:
        return HalfSpaceValue(zs, PLUS_INF)
    if sb.is_plus_inf or A.is_empty:
        return HalfSpaceValue(zs, MINUS_INF)
    return HalfSpaceValue(zs, ExtReal(sa.value - sb.value))


def z_residuate(A: UpperSet, B: UpperSet, zstar) -> UpperSet:
    return z_residuate_value(A, B, zstar).to_upper(A.cone)


def S_value(xstar: Sequence, zstar: Sequence, x: Sequence, cone: ConeSpec) -> HalfSpaceValue:
    """``S_{(x*,z*)}(x) = {z : x*.x + z*.z <= 0}`` as a half-space value (``z*`` may be 0)."""
    zs = cone.require_dual(zstar, allow_zero=True)
    s = dot(tuple(to_rational(v) for v in xstar), tuple(to_rational(v) for v in x))
    if not any(zs):
        return HalfSpaceValue(zs, PLUS_INF if s <= 0 else MINUS_INF)
    return HalfSpaceValue(zs, ExtReal(-s))


def S_eval(xstar: Sequence, zstar: Sequence, x: Sequence, cone: ConeSpec) -> UpperSet:
    return S_value(xstar, zstar, x, cone).to_upper(cone)
