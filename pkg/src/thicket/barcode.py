"""Graded barcodes on the real line.

A barcode is a finite multiset of (interval, cohomological degree) pairs over
a prime field; it is the canonical form of a formal direct sum of shifted
interval sheaves.  Intervals carry endpoint kinds (closed/open), infinite
endpoints are always open, and empty intervals are rejected at construction
so that degenerate inputs fail loudly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .fieldmath import is_prime
from .scalars import (NEG_INF, POS_INF, check_extended, format_extended,
                      is_finite)


class InvalidIntervalError(ValueError):
    pass


class CharacteristicMismatchError(ValueError):
    pass


class Kind(enum.Enum):
    CLOSED = "closed"
    OPEN = "open"

    @property
    def flipped(self) -> "Kind":
        return Kind.OPEN if self is Kind.CLOSED else Kind.CLOSED

    def __repr__(self):
        return self.name


CLOSED = Kind.CLOSED
OPEN = Kind.OPEN


@dataclass(frozen=True)
class Interval:
    left: object
    lkind: Kind
    right: object
    rkind: Kind

    def __post_init__(self):
        object.__setattr__(self, "left", check_extended(self.left))
        object.__setattr__(self, "right", check_extended(self.right))
        if not is_finite(self.left) and self.lkind is not OPEN:
            raise InvalidIntervalError(f"infinite endpoint must be open: {self}")
        if not is_finite(self.right) and self.rkind is not OPEN:
            raise InvalidIntervalError(f"infinite endpoint must be open: {self}")
        if self.left > self.right:
            raise InvalidIntervalError(f"empty interval: {self}")
        if self.left == self.right:
            if not is_finite(self.left):
                raise InvalidIntervalError(f"empty interval: {self}")
            if self.lkind is not CLOSED or self.rkind is not CLOSED:
                raise InvalidIntervalError(f"empty degenerate interval: {self}")

    # -- structure -----------------------------------------------------
    @property
    def is_bounded(self) -> bool:
        return is_finite(self.left) and is_finite(self.right)

    @property
    def is_singleton(self) -> bool:
        return self.left == self.right

    @property
    def is_full_line(self) -> bool:
        return self.left == NEG_INF and self.right == POS_INF

    @property
    def is_left_ray(self) -> bool:
        return self.left == NEG_INF and is_finite(self.right)

    @property
    def is_right_ray(self) -> bool:
        return is_finite(self.left) and self.right == POS_INF

    @property
    def length(self):
        if self.is_bounded:
            return self.right - self.left
        return POS_INF

    def contains(self, t: Fraction) -> bool:
        if t < self.left or t > self.right:
            return False
        if t == self.left and self.lkind is OPEN:
            return False
        if t == self.right and self.rkind is OPEN:
            return False
        return True

    def sort_key(self):
        return (self.left, self.lkind is OPEN, self.right, self.rkind is OPEN)

    def __str__(self):
        lb = "[" if self.lkind is CLOSED else "("
        rb = "]" if self.rkind is CLOSED else ")"
        return f"{lb}{format_extended(self.left)}, {format_extended(self.right)}{rb}"


def interval(left, lkind: Kind, right, rkind: Kind) -> Interval:
    return Interval(left, lkind, right, rkind)


def closed(a, b) -> Interval:
    return Interval(Fraction(a), CLOSED, Fraction(b), CLOSED)


def open_iv(a, b) -> Interval:
    return Interval(Fraction(a), OPEN, Fraction(b), OPEN)


def half_open(a, b) -> Interval:          # [a, b)
    return Interval(Fraction(a), CLOSED, Fraction(b), OPEN)


def half_open_r(a, b) -> Interval:        # (a, b]
    return Interval(Fraction(a), OPEN, Fraction(b), CLOSED)


def singleton(a) -> Interval:
    return Interval(Fraction(a), CLOSED, Fraction(a), CLOSED)


def ray_right(a, kind: Kind = CLOSED) -> Interval:   # [a, +inf) or (a, +inf)
    return Interval(Fraction(a), kind, POS_INF, OPEN)


def ray_left(b, kind: Kind = CLOSED) -> Interval:    # (-inf, b] or (-inf, b)
    return Interval(NEG_INF, OPEN, Fraction(b), kind)


def full_line() -> Interval:
    return Interval(NEG_INF, OPEN, POS_INF, OPEN)


def intersect(a: Interval, b: Interval):
    """Intersection of two intervals, or None when empty."""
    left = max(a.left, b.left)
    right = min(a.right, b.right)
    if left > right:
        return None
    if is_finite(left):
        lkind = CLOSED if (a.contains(left) and b.contains(left)) else OPEN
    else:
        lkind = OPEN
    if is_finite(right):
        rkind = CLOSED if (a.contains(right) and b.contains(right)) else OPEN
    else:
        rkind = OPEN
    if left == right and (lkind is OPEN or rkind is OPEN):
        return None
    return Interval(left, lkind, right, rkind)


@dataclass(frozen=True)
class Bar:
    iv: Interval
    degree: int

    def sort_key(self):
        return (self.degree,) + self.iv.sort_key()

    def __str__(self):
        return f"{self.iv} @deg {self.degree}"


class GradedBarcode:
    """Canonically sorted multiset of bars over F_p (default p = 2)."""

    __slots__ = ("bars", "char")

    def __init__(self, bars=(), char: int = 2):
        if not is_prime(char):
            raise ValueError(f"field characteristic must be prime, got {char}")
        items = []
        for b in bars:
            if not isinstance(b, Bar):
                raise TypeError(f"not a Bar: {b!r}")
            items.append(b)
        items.sort(key=Bar.sort_key)
        self.bars = tuple(items)
        self.char = char

    def __len__(self):
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def __eq__(self, other):
        return (isinstance(other, GradedBarcode)
                and self.char == other.char and self.bars == other.bars)

    def __hash__(self):
        return hash((self.bars, self.char))

    def __repr__(self):
        inner = " + ".join(str(b) for b in self.bars) or "0"
        return f"<{inner} | F_{self.char}>"

    def direct_sum(self, other: "GradedBarcode") -> "GradedBarcode":
        if self.char != other.char:
            raise CharacteristicMismatchError("direct sum over different fields")
        return GradedBarcode(self.bars + other.bars, self.char)

    def shift(self, k: int) -> "GradedBarcode":
        """Degree shift: F[-k] adds k to every bar degree."""
        return GradedBarcode([Bar(b.iv, b.degree + k) for b in self.bars], self.char)

    def finite_endpoints(self):
        out = []
        for b in self.bars:
            for x in (b.iv.left, b.iv.right):
                if is_finite(x):
                    out.append(x)
        return out


def canonicalize(bars, char: int = 2) -> GradedBarcode:
    """Sorted canonical form; rejects invalid bars.  Idempotent."""
    return GradedBarcode(bars, char)


def iso_equal(f: GradedBarcode, g: GradedBarcode) -> bool:
    """Isomorphism test: canonical forms coincide."""
    if f.char != g.char:
        raise CharacteristicMismatchError(
            f"cannot compare barcodes over F_{f.char} and F_{g.char}")
    return f.bars == g.bars


# ---------------------------------------------------------------------------
# Derived global sections, degree-wise dimension tables.
#
# Per interval shape, the cohomology of a single interval sheaf k_I sits in
# one degree (or vanishes).  Values below were certified against the cellular
# section-complex oracle in the model module.

def _rgamma_offset(iv: Interval):
    """Degree offset of RGamma(R; k_I), or None when it vanishes."""
    if iv.is_full_line:
        return 0
    if iv.is_left_ray:
        return 0 if iv.rkind is CLOSED else None
    if iv.is_right_ray:
        return 0 if iv.lkind is CLOSED else None
    if iv.lkind is CLOSED and iv.rkind is CLOSED:
        return 0
    if iv.lkind is OPEN and iv.rkind is OPEN:
        return 1
    return None


def _rgamma_c_offset(iv: Interval):
    """Degree offset of compactly supported sections, or None."""
    if iv.is_full_line:
        return 1
    if iv.is_left_ray:
        return None if iv.rkind is CLOSED else 1
    if iv.is_right_ray:
        return None if iv.lkind is CLOSED else 1
    if iv.lkind is CLOSED and iv.rkind is CLOSED:
        return 0
    if iv.lkind is OPEN and iv.rkind is OPEN:
        return 1
    return None


def _accumulate(table, F: GradedBarcode):
    dims: dict[int, int] = {}
    for b in F.bars:
        off = table(b.iv)
        if off is not None:
            d = b.degree + off
            dims[d] = dims.get(d, 0) + 1
    return {d: n for d, n in sorted(dims.items()) if n}


def global_sections(F: GradedBarcode) -> dict[int, int]:
    """Degree-wise dimensions of derived global sections."""
    return _accumulate(_rgamma_offset, F)


def global_sections_c(F: GradedBarcode) -> dict[int, int]:
    """Degree-wise dimensions of compactly supported global sections."""
    return _accumulate(_rgamma_c_offset, F)


def rgamma_c_interval(iv: Interval) -> dict[int, int]:
    off = _rgamma_c_offset(iv)
    return {} if off is None else {off: 1}


def stalk_dims(F: GradedBarcode, t: Fraction) -> dict[int, int]:
    dims: dict[int, int] = {}
    for b in F.bars:
        if b.iv.contains(t):
            dims[b.degree] = dims.get(b.degree, 0) + 1
    return {d: n for d, n in sorted(dims.items()) if n}


def dims_add(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out = dict(a)
    for d, n in b.items():
        out[d] = out.get(d, 0) + n
    return {d: n for d, n in sorted(out.items()) if n}


# ---------------------------------------------------------------------------
# Duality.

def dualize_bar(b: Bar) -> Bar:
    """Dual of a single shifted interval sheaf.

    Finite endpoint kinds flip and the degree negates, except that a point
    bar is self-dual with a one-step degree shift (its dual is the point
    sheaf shifted by one, forced by the stalk computation of sections
    supported at the point).
    """
    iv = b.iv
    if iv.is_singleton:
        return Bar(iv, 1 - b.degree)
    lk = iv.lkind.flipped if is_finite(iv.left) else iv.lkind
    rk = iv.rkind.flipped if is_finite(iv.right) else iv.rkind
    return Bar(Interval(iv.left, lk, iv.right, rk), -b.degree)


def dualize(F: GradedBarcode) -> GradedBarcode:
    return GradedBarcode([dualize_bar(b) for b in F.bars], F.char)
