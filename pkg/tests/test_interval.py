import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dyndeg.interval import (Interval, hull, imax, iroot_exact, nth_root_down, nth_root_up,
                             round_down, round_up)

fracs = st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 9, max_denominator=10 ** 6)


@given(fracs)
def test_rounding_brackets_value(q):
    assert Fraction(round_down(q)) <= q <= Fraction(round_up(q))


@given(fracs, st.integers(1, 12))
def test_nth_roots_bracket(q, n):
    lo, hi = nth_root_down(q, n), nth_root_up(q, n)
    assert Fraction(lo) ** n <= q <= Fraction(hi) ** n
    assert hi - lo <= 4 * math.ulp(hi)


@given(st.integers(1, 10 ** 12), st.integers(1, 8))
def test_iroot_exact(v, n):
    r = iroot_exact(v ** n, n)
    assert r == v
    if v > 1 and n > 1:
        assert iroot_exact(v ** n + 1, n) is None


def test_interval_operations():
    a = Interval(1.0, 2.0)
    b = Interval(3.0, 5.0)
    assert (a * b).lo <= 3.0 and (a * b).hi >= 10.0
    assert hull([a, b]) == Interval(1.0, 5.0)
    assert imax([a, b]) == b
    assert not a.overlaps(b) and a.distance(b) == 1.0
    assert Interval.point(Fraction(1, 3)).contains(Fraction(1, 3))
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
