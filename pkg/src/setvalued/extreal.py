"""Exact rationals and the extended real line with inf-addition.

The extended reals ``R ∪ {-inf, +inf}`` are the one-dimensional model of the
image space of upper sets: ``[r, +inf)`` is identified with ``r``, the whole
line with ``-inf`` and the empty set with ``+inf``.  Addition follows the
inf-addition convention, where ``+inf`` absorbs everything (including
``-inf``), and the residuation ``r -. s`` is the smallest ``t`` with
``r <= s +. t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]

Vector = tuple  # tuple[Fraction, ...]


def to_rational(value: RationalLike) -> Fraction:
    """Parse ``value`` as an exact rational.

    Floats are refused: every number entering the library must be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def to_vector(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@total_ordering
@dataclass(frozen=True)
class ExtReal:
    """An element of ``Q ∪ {-inf, +inf}``.

    ``inf`` is ``+1`` for plus infinity, ``-1`` for minus infinity and ``0``
    for a finite value stored in ``value``.
    """

    value: Fraction = Fraction(0)
    inf: int = 0

    def __post_init__(self):
        if self.inf not in (-1, 0, 1):
            raise ValueError("inf flag must be -1, 0 or 1")
        if self.inf:
            object.__setattr__(self, "value", Fraction(0))
        elif not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", to_rational(self.value))

    @classmethod
    def of(cls, value: RationalLike | "ExtReal") -> "ExtReal":
        if isinstance(value, ExtReal):
            return value
        return cls(to_rational(value))

    @property
    def is_finite(self) -> bool:
        return self.inf == 0

    @property
    def is_plus_inf(self) -> bool:
        return self.inf == 1

    @property
    def is_minus_inf(self) -> bool:
        return self.inf == -1

    def _key(self):
        return (self.inf, self.value)

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() < other._key()

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __neg__(self) -> "ExtReal":
        if self.inf:
            return ExtReal(inf=-self.inf)
        return ExtReal(-self.value)

    def __add__(self, other) -> "ExtReal":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return inf_add(self, other)

    __radd__ = __add__

    def scale(self, t: RationalLike) -> "ExtReal":
        """Multiply by a strictly positive rational."""
        t = to_rational(t)
        if t <= 0:
            raise ValueError("scale factor must be positive")
        if self.inf:
            return self
        return ExtReal(self.value * t)

    def __str__(self) -> str:
        if self.inf == 1:
            return "+inf"
        if self.inf == -1:
            return "-inf"
        return format_rational(self.value)

    def __repr__(self) -> str:
        return f"ExtReal({self})"

    def to_json(self) -> str:
        return str(self)

    @classmethod
    def from_json(cls, text: str | int) -> "ExtReal":
        if isinstance(text, str):
            t = text.strip()
            if t in ("+inf", "inf"):
                return PLUS_INF
            if t == "-inf":
                return MINUS_INF
        return cls(to_rational(text))


PLUS_INF = ExtReal(inf=1)
MINUS_INF = ExtReal(inf=-1)


def _coerce(x):
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ExtReal(Fraction(x))
    return NotImplemented


def inf_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Inf-addition: ``+inf`` dominates, then ``-inf`` absorbs finite values."""
    a, b = ExtReal.of(a), ExtReal.of(b)
    if a.is_plus_inf or b.is_plus_inf:
        return PLUS_INF
    if a.is_minus_inf or b.is_minus_inf:
        return MINUS_INF
    return ExtReal(a.value + b.value)


def inf_residuate(r: ExtReal, s: ExtReal) -> ExtReal:
    """``r -. s = inf{t in R : r <= s +. t}``.

    The infimum of the empty set is ``+inf``; when every real ``t`` qualifies
    the result is ``-inf``.
    """
    r, s = ExtReal.of(r), ExtReal.of(s)
    if s.is_plus_inf:
        # s +. t = +inf for every t
        return MINUS_INF
    if r.is_minus_inf:
        return MINUS_INF
    if s.is_minus_inf:
        # -inf +. t = -inf for finite t; only r = -inf would qualify
        return PLUS_INF
    if r.is_plus_inf:
        return PLUS_INF
    return ExtReal(r.value - s.value)
