import random

import pytest
import sympy
from hypothesis import given, strategies as st

from dyndeg import (AmbientSpace, Polynomial, RationalMap, compose, format_map,
                    format_polynomial, is_dominant, parse_map, parse_polynomial, poly_gcd,
                    poly_mul, reduce_map)
from dyndeg.errors import (DimensionMismatch, HomogeneityError, ParseError, SpaceMismatch,
                           UnknownVariable, ZeroMap)
from oracles import naive_mul

P1 = AmbientSpace.projective(1)
P2 = AmbientSpace.projective(2)
P1P1 = AmbientSpace.product(1, 1)
SIGMA = "[x1*x2 : x0*x2 : x0*x1]"


def poly(text, space=P2):
    return parse_polynomial(text, space)


def random_homogeneous(rng, space, deg, nterms):
    """Random homogeneous polynomial of total degree ``deg`` on a single block."""
    terms = {}
    for _ in range(nterms):
        cuts = sorted(rng.randint(0, deg) for _ in range(space.nvars - 1))
        exp = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
        terms[exp] = rng.randint(-5, 5)
    terms = {e: c for e, c in terms.items() if c}
    return Polynomial(space, terms or {(deg,) + (0,) * (space.nvars - 1): 1})


# -- spaces ------------------------------------------------------------------------------------

def test_ambient_space_shapes():
    assert P2.total_dim == 2 and P2.nvars == 3 and P2.nblocks == 1
    assert P1P1.variable_names == ("x0", "x1", "y0", "y1")
    assert str(P1P1) == "P^1 x P^1"
    assert P1P1.multidegree((1, 1, 2, 0)) == (2, 2)


# -- parsing and printing ----------------------------------------------------------------------

def test_parse_quadric_has_degree_two():
    p = poly("x0^2 - x1*x2")
    assert p.multidegree == (2,)
    assert format_polynomial(p) == "x0^2 - x1*x2"


def test_parse_zero():
    assert poly("0").is_zero()
    assert format_polynomial(poly("0")) == "0"


def test_mixed_degrees_rejected():
    with pytest.raises(HomogeneityError):
        poly("x0 + x1^2")


def test_unknown_variable_has_position():
    with pytest.raises(UnknownVariable) as exc:
        poly("x0 + q1")
    assert (exc.value.line, exc.value.column) == (1, 6)


def test_parse_error_positions_within_map_text():
    with pytest.raises(ParseError) as exc:
        parse_map("[x1*x2 :\n x0*x2 : x0*x1 +* 2]", P2)
    assert (exc.value.line, exc.value.column) == (2, 17)


@pytest.mark.parametrize("bad", ["x0 +", "(x0", "x0^", "x0 x1", "", "x0 ** -1"])
def test_malformed_expressions(bad):
    with pytest.raises(ParseError):
        poly(bad)


def test_parse_extensions():
    assert poly("-x0 + x1") == poly("x1 - x0")
    assert poly("x0**2/2 + x1^2/3") == poly("3*x0^2 + 2*x1^2")
    assert poly("(x0 + x1)^2") == poly("x0^2 + 2*x0*x1 + x1^2")


@given(st.integers(0, 10 ** 6))
def test_format_parse_roundtrip(seed):
    rng = random.Random(seed)
    p = random_homogeneous(rng, P2, rng.randint(0, 4), rng.randint(1, 6))
    assert parse_polynomial(format_polynomial(p), P2) == p.primitive()


# -- multiplication ------------------------------------------------------------------------------

def test_difference_of_squares():
    assert poly_mul(poly("x0 + x1"), poly("x0 - x1")) == poly("x0^2 - x1^2")


def test_multiplying_by_one_is_identity():
    rng = random.Random(3)
    one = Polynomial.constant(P2, 1)
    for _ in range(20):
        p = random_homogeneous(rng, P2, rng.randint(0, 4), 4).primitive()
        assert poly_mul(one, p) == p


@given(st.integers(0, 10 ** 6))
def test_product_matches_expansion_oracle(seed):
    rng = random.Random(seed)
    a = random_homogeneous(rng, P2, rng.randint(0, 6), 6)
    b = random_homogeneous(rng, P2, rng.randint(0, 6), 6)
    assert (a * b).terms == naive_mul(a.terms, b.terms)


def test_poly_mul_rejects_space_mismatch():
    with pytest.raises(SpaceMismatch):
        poly_mul(poly("x0", P1), poly("x0", P2))


# -- gcd ---------------------------------------------------------------------------------------------

def test_gcd_examples():
    assert poly_gcd(poly("x0^2*x1"), poly("x0*x1^2")) == poly("x0*x1")
    assert poly_gcd(poly("x0^2 + x1*x2"), Polynomial.constant(P2, 1)) == Polynomial.constant(P2, 1)
    a = poly("(x0 + x1)^2*x2")
    b = poly("(x0 + x1)*x1")
    g = poly_gcd(a, b)
    assert g == poly("x0 + x1")
    assert g.divides(a) and g.divides(b)


@given(st.integers(0, 10 ** 6))
def test_gcd_divides_and_is_maximal(seed):
    rng = random.Random(seed)
    c = random_homogeneous(rng, P2, rng.randint(1, 2), 3)
    a = random_homogeneous(rng, P2, rng.randint(0, 2), 3) * c
    b = random_homogeneous(rng, P2, rng.randint(0, 2), 3) * c
    g = poly_gcd(a, b)
    assert g.divides(a) and g.divides(b) and c.primitive().divides(g)
    names = sympy.symbols("x0 x1 x2")
    ref = sympy.gcd(sympy.sympify(format_polynomial(a)), sympy.sympify(format_polynomial(b)))
    assert sympy.Poly(ref, *names).total_degree() == g.multidegree[0]


# -- maps ------------------------------------------------------------------------------------------

def test_identity_composition():
    f = parse_map(SIGMA, P2)
    assert compose(RationalMap.identity(P2), f) == f
    assert compose(f, RationalMap.identity(P2)) == f


def test_cremona_square_before_reduction():
    f = parse_map(SIGMA, P2)
    ff = compose(f, f)
    assert format_map(ff) == "[x0^2*x1*x2 : x0*x1^2*x2 : x0*x1*x2^2]"
    assert ff.multidegree_matrix == ((4,),)
    assert reduce_map(ff) == RationalMap.identity(P2)


def test_power_map_composition():
    f = parse_map("[x0^2 : x1^2]", P1)
    assert compose(f, f) == parse_map("[x0^4 : x1^4]", P1)


def test_reduce_examples():
    g = parse_map("[x0^2 + x1^2 : x0*x1]", P1)
    assert reduce_map(g) == g
    h = parse_map("[x0*(x0^2 + x1^2) : x0*x1^2]", P1)
    assert reduce_map(h) == parse_map("[x0^2 + x1^2 : x1^2]", P1)


def test_reduce_is_idempotent_and_sign_normalised():
    f = parse_map("[-x0*x1 : -x1^2]", P1)
    r = reduce_map(f)
    assert r == parse_map("[x0 : x1]", P1)
    assert reduce_map(r) == r


def test_product_space_map_multidegrees():
    f = parse_map("[x0^2 : x1^2] ; [x0*y0^2 : x1*y1^2]", P1P1)
    assert f.multidegree_matrix == ((2, 0), (1, 2))


def test_map_errors():
    with pytest.raises(DimensionMismatch):
        parse_map("[x0 : x1]", P2)
    with pytest.raises(ZeroMap):
        parse_map("[0 : 0 : 0]", P2)
    with pytest.raises(HomogeneityError):
        parse_map("[x0 : x1^2 : x2]", P2)


def test_dominance():
    assert is_dominant(RationalMap.identity(P2))
    assert not is_dominant(parse_map("[x0 : x1 : x0 + x1]", P2))
    assert is_dominant(parse_map(SIGMA, P2), rng=random.Random(1))
