from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from dyndeg import _roots as R
from dyndeg.errors import NonConvergence

x = sympy.Symbol("x")
coeffs = st.lists(st.integers(-6, 6), min_size=2, max_size=8).filter(lambda c: c[-1] != 0)


def sym(p):
    return sum(c * x ** i for i, c in enumerate(p))


@given(coeffs)
def test_enclosures_contain_numpy_roots(p):
    rep = R.certified_roots(p)
    ref = np.roots(list(reversed(p)))
    for z in ref:
        assert any(abs(complex(float(e.center[0]), float(e.center[1])) - z)
                   <= float(e.radius) + 1e-6 * max(1, abs(z)) for e in rep.roots)
    assert sum(e.multiplicity for e in rep.roots) == len(p) - 1 - next(
        i for i, c in enumerate(p) if c)


@given(coeffs)
def test_spectral_radius_matches_numpy(p):
    if all(c == 0 for c in p[:-1]):
        return
    rep = R.certified_roots(p)
    iv = R.spectral_radius(rep)
    ref = max(abs(np.roots(list(reversed(p)))))
    assert iv.lo - 1e-7 <= ref <= iv.hi + 1e-7


@given(coeffs)
def test_squarefree_decomposition_matches_sympy(p):
    mine = sorted((m, R.degree(f)) for f, m in R.squarefree_decomposition(p) if R.degree(f) > 0)
    _, ref = sympy.sqf_list(sym(p))
    expected = {}
    for f, m in ref:
        expected[m] = expected.get(m, 0) + sympy.degree(f, x)
    assert dict(mine) == expected


@given(coeffs)
def test_sturm_count_matches_sympy(p):
    # the Sturm count is of distinct real roots of the squarefree part
    sqf = R.pdivmod(p, R.pgcd(p, R.pderiv(p)))[0]
    assert R.sturm_real_root_count(R.primitive(sqf)) == len(set(sympy.real_roots(sym(p))))


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_charpoly_matches_sympy(M):
    mine = [Fraction(c) for c in R.charpoly(M)]
    ref = sympy.Matrix(M).charpoly(x).all_coeffs()
    assert mine == [Fraction(int(c)) for c in reversed(ref)] or \
        mine == [Fraction(int(c)) for c in ref]


def test_lehmer_number_isolated():
    lehmer = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]
    iv = R.spectral_radius(R.certified_roots(lehmer))
    assert 1.17628081825991 <= iv.hi and iv.lo <= 1.17628081825992
    assert iv.hi - iv.lo < 1e-12


def test_unit_circle_snapping():
    rep = R.certified_roots([1, 0, 1])
    assert all(e.exact_modulus == 1 for e in rep.roots)
    assert R.on_circle_count([1, 0, 1], Fraction(1)) == 2
    assert R.on_circle_count([-2, 1], Fraction(1)) == 0


def test_repeated_roots_carry_multiplicity():
    rep = R.certified_roots([1, -2, 1])        # (x - 1)^2
    assert [(e.multiplicity, e.exact_modulus) for e in rep.roots] == [(2, 1)]


def test_precision_cap_raises():
    wilkinson = [int(c) for c in reversed(sympy.Poly(sympy.prod([x - i for i in range(1, 21)]), x)
                                          .all_coeffs())]
    wilkinson[1] += 1
    with pytest.raises(NonConvergence):
        R.certified_roots(wilkinson, eps=1e-300, max_prec=64)
