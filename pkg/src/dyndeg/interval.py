"""Closed float intervals with outward rounding.

Endpoints are ordinary floats, but every operation is evaluated exactly in
rationals and then rounded outward, so an Interval built here always encloses
the true real value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

_INF = math.inf


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite endpoint")
        return Fraction(x)
    return Fraction(x)


def round_down(q) -> float:
    """Largest float <= q."""
    q = _as_fraction(q)
    f = _approx(q)
    while Fraction(f) > q:
        f = math.nextafter(f, -_INF)
    while True:
        g = math.nextafter(f, _INF)
        if Fraction(g) <= q:
            f = g
        else:
            return f


def round_up(q) -> float:
    """Smallest float >= q."""
    q = _as_fraction(q)
    f = _approx(q)
    while Fraction(f) < q:
        f = math.nextafter(f, _INF)
    while True:
        g = math.nextafter(f, -_INF)
        if Fraction(g) >= q:
            f = g
        else:
            return f


def _approx(q: Fraction) -> float:
    try:
        return float(q)
    except OverflowError:
        return math.copysign(1.7976931348623157e308, q)


def _root_guess(q: Fraction, n: int) -> float:
    if q == 0:
        return 0.0
    lg = (math.log(q.numerator) - math.log(q.denominator)) / n
    return math.exp(lg) if lg < 709 else 1.7976931348623157e308


def nth_root_down(q, n: int) -> float:
    """Largest float r >= 0 with r**n <= q (q >= 0)."""
    q = _as_fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    r = _root_guess(q, n)
    while r > 0 and Fraction(r) ** n > q:
        r = math.nextafter(r, -_INF)
    while True:
        s = math.nextafter(r, _INF)
        if Fraction(s) ** n <= q:
            r = s
        else:
            return max(r, 0.0)


def nth_root_up(q, n: int) -> float:
    """Smallest float r >= 0 with r**n >= q (q >= 0)."""
    q = _as_fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return 0.0
    r = _root_guess(q, n)
    while Fraction(r) ** n < q:
        r = math.nextafter(r, _INF)
    while True:
        s = math.nextafter(r, -_INF)
        if s >= 0 and Fraction(s) ** n >= q:
            r = s
        else:
            return r


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # -- constructors ----------------------------------------------------
    @classmethod
    def point(cls, x) -> "Interval":
        q = _as_fraction(x)
        return cls(round_down(q), round_up(q))

    @classmethod
    def enclose(cls, lo, hi) -> "Interval":
        """Outward-rounded enclosure of the exact rational range [lo, hi]."""
        return cls(round_down(_as_fraction(lo)), round_up(_as_fraction(hi)))

    # -- queries -----------------------------------------------------------
    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        q = _as_fraction(x)
        return Fraction(self.lo) <= q <= Fraction(self.hi)

    def overlaps(self, other: "Interval", tol: float = 0.0) -> bool:
        return self.distance(other) <= tol

    def distance(self, other: "Interval") -> float:
        """Gap between the two intervals; 0 when they overlap."""
        if self.hi < other.lo:
            return other.lo - self.hi
        if other.hi < self.lo:
            return self.lo - other.hi
        return 0.0

    def certainly_gt(self, other: "Interval") -> bool:
        return self.lo > other.hi

    def certainly_lt(self, other: "Interval") -> bool:
        return self.hi < other.lo

    # -- arithmetic --------------------------------------------------------
    def __mul__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.point(other)
        a, b = Fraction(self.lo), Fraction(self.hi)
        c, d = Fraction(other.lo), Fraction(other.hi)
        prods = (a * c, a * d, b * c, b * d)
        return Interval.enclose(min(prods), max(prods))

    __rmul__ = __mul__

    def __add__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.point(other)
        return Interval.enclose(Fraction(self.lo) + Fraction(other.lo),
                                Fraction(self.hi) + Fraction(other.hi))

    __radd__ = __add__

    def square(self) -> "Interval":
        return self * self

    def root(self, n: int) -> "Interval":
        """Enclosure of the n-th root (endpoints clamped at 0)."""
        if n < 1:
            raise ValueError("n must be >= 1")
        lo = max(Fraction(self.lo), Fraction(0))
        hi = max(Fraction(self.hi), Fraction(0))
        return Interval(nth_root_down(lo, n), nth_root_up(hi, n))

    def sqrt(self) -> "Interval":
        return self.root(2)

    def __repr__(self):
        if self.is_point:
            return f"[{self.lo!r}]"
        return f"[{self.lo!r}, {self.hi!r}]"

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}


def hull(intervals: Iterable[Interval]) -> Interval:
    ivs = list(intervals)
    return Interval(min(i.lo for i in ivs), max(i.hi for i in ivs))


def imax(intervals: Iterable[Interval]) -> Interval:
    """Enclosure of the maximum of values lying in the given intervals."""
    ivs = list(intervals)
    return Interval(max(i.lo for i in ivs), max(i.hi for i in ivs))


def iroot_exact(x: int, n: int):
    """Integer n-th root of x if x is a perfect n-th power, else None."""
    if x < 0:
        return None
    if x in (0, 1):
        return x
    r = round(_root_guess(Fraction(x), n)) if x.bit_length() < 1000 else None
    if r is None:
        lo, hi = 0, 1 << (x.bit_length() // n + 1)
        while lo < hi:
            m = (lo + hi) // 2
            if m ** n < x:
                lo = m + 1
            else:
                hi = m
        r = lo
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** n == x:
            return c
    return None
