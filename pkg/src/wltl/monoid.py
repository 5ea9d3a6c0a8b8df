"""Idempotent omega-valuation monoids with exact weights.

Weights are exact rationals or one of the two infinity sentinels ``INF`` /
``NEG_INF``.  Integral values are stored as ``int`` and the rest as
:class:`fractions.Fraction`; both compare and hash alike, and ints keep the
hot comparison loops cheap.  Two instances are provided:

``TROPICAL``
    ``([0, inf], min, +, sum, inf, 0)``: the min-plus semiring viewed as a
    product omega-valuation monoid; the omega-valuation is the infinite sum.

``LIMINF``
    ``([-inf, inf], max, min, liminf, -inf, inf)``: a generalized product
    omega-valuation monoid whose liminf ignores ``inf`` entries as long as
    other values occur.

Omega-valuations are only evaluated on ultimately periodic sequences
``stem . period^omega``.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Weight = Union[int, Fraction, float]


def _exact(x) -> Weight:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x

INF: float = math.inf
NEG_INF: float = -math.inf

PRODUCT = "product"
GENERALIZED = "generalized"


class WeightError(ValueError):
    """Raised for malformed weight literals or weights outside a carrier."""


def as_weight(value) -> Weight:
    """Coerce ``value`` to an exact weight.

    Accepts ints, Fractions, the infinities, and strings such as ``"2"``,
    ``"3/2"``, ``"0.5"``, ``"inf"`` and ``"-inf"``.  Finite floats are
    rejected so that no rounding can sneak in.
    """
    if isinstance(value, bool):
        raise WeightError(f"not a weight: {value!r}")
    if isinstance(value, (int, Fraction)):
        return _exact(value)
    if isinstance(value, float):
        if value == INF:
            return INF
        if value == NEG_INF:
            return NEG_INF
        raise WeightError(f"finite floats are not exact weights: {value!r}")
    if isinstance(value, str):
        text = value.strip()
        lowered = text.lower()
        if lowered in ("inf", "+inf", "infinity", "∞"):
            return INF
        if lowered in ("-inf", "-infinity", "-∞"):
            return NEG_INF
        try:
            return _exact(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise WeightError(f"bad weight literal {value!r}") from exc
    raise WeightError(f"not a weight: {value!r}")


def format_weight(w: Weight) -> str:
    """Text form of a weight, inverse of :func:`as_weight`."""
    if w == INF:
        return "inf"
    if w == NEG_INF:
        return "-inf"
    w = Fraction(w)
    if w.denominator == 1:
        return str(w.numerator)
    return f"{w.numerator}/{w.denominator}"


@dataclass(frozen=True)
class UltPeriodicSeq:
    """The infinite sequence ``stem + period + period + ...``."""

    stem: tuple
    period: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(as_weight(x) for x in self.stem))
        object.__setattr__(self, "period", tuple(as_weight(x) for x in self.period))
        if not self.period:
            raise ValueError("period must be non-empty")

    def __getitem__(self, i: int) -> Weight:
        if i < len(self.stem):
            return self.stem[i]
        return self.period[(i - len(self.stem)) % len(self.period)]

    def prefix(self, n: int) -> list:
        return [self[i] for i in range(n)]


class Monoid(ABC):
    """An idempotent (generalized) product omega-valuation monoid."""

    name: str
    kind: str
    zero: Weight
    one: Weight

    @abstractmethod
    def plus(self, a: Weight, b: Weight) -> Weight: ...

    @abstractmethod
    def times(self, a: Weight, b: Weight) -> Weight: ...

    @abstractmethod
    def val_omega(self, stem: Sequence[Weight], period: Sequence[Weight]) -> Weight:
        """Valuation of ``stem . period^omega``."""

    @abstractmethod
    def in_carrier(self, w: Weight) -> bool: ...

    def val_omega_seq(self, s: UltPeriodicSeq) -> Weight:
        return self.val_omega(s.stem, s.period)

    def val_finite(self, prefix: Sequence[Weight]) -> Weight:
        """Valuation of ``prefix`` padded with ``one`` forever."""
        return self.val_omega(prefix, (self.one,))

    def sum(self, values: Iterable[Weight]) -> Weight:
        acc = self.zero
        for v in values:
            acc = self.plus(acc, v)
        return acc

    def natural_leq(self, a: Weight, b: Weight) -> bool:
        """``a <= b`` in the order induced by idempotent addition."""
        return self.plus(b, a) == b

    def weight(self, value) -> Weight:
        """Parse/coerce ``value`` and check it lies in this carrier."""
        w = as_weight(value)
        if not self.in_carrier(w):
            raise WeightError(f"{format_weight(w)} is not in the {self.name} carrier")
        return w

    def is_unit_like(self, w: Weight) -> bool:
        return w == self.zero or w == self.one

    def __repr__(self) -> str:
        return f"<monoid {self.name}>"

    def __reduce__(self):
        return (get_monoid, (self.name,))


class Tropical(Monoid):
    name = "tropical"
    kind = PRODUCT
    zero = INF
    one = 0

    def plus(self, a, b):
        return a if a <= b else b

    def times(self, a, b):
        if a == INF or b == INF:
            return INF
        return _exact(a + b)

    def val_omega(self, stem, period):
        if not period:
            raise ValueError("period must be non-empty")
        total = 0
        for w in stem:
            if w == INF:
                return INF
            total = _exact(total + w)
        # any strictly positive entry repeated forever diverges to inf
        if any(w != 0 for w in period):
            return INF
        return total

    def in_carrier(self, w):
        return w == INF or (w != NEG_INF and w >= 0)


class Liminf(Monoid):
    name = "liminf"
    kind = GENERALIZED
    zero = NEG_INF
    one = INF

    def plus(self, a, b):
        return a if a >= b else b

    def times(self, a, b):
        return a if a <= b else b

    def val_omega(self, stem, period):
        if not period:
            raise ValueError("period must be non-empty")
        if any(w == NEG_INF for w in stem) or any(w == NEG_INF for w in period):
            return NEG_INF
        recurring = [w for w in period if w != INF]
        if recurring:
            return min(recurring)
        transient = [w for w in stem if w != INF]
        if transient:
            return min(transient)
        return INF

    def in_carrier(self, w):
        return True


TROPICAL = Tropical()
LIMINF = Liminf()

MONOIDS = {m.name: m for m in (TROPICAL, LIMINF)}


def get_monoid(name: str) -> Monoid:
    try:
        return MONOIDS[name]
    except KeyError:
        raise ValueError(f"unknown monoid {name!r}; expected one of {sorted(MONOIDS)}") from None
