from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from dyndeg import (CycleLattice, PullbackAction, blowup_lattice, cone_preservation_r1r2_check,
                    cremona_action, hodge_signature, lehmer_action, norm_one, simplicity_check,
                    spectral_data)
from dyndeg import _lp
from dyndeg.cyclelat import diagonal_action, intersect, point_lattice
from dyndeg.errors import ConeNotPreserved, DimensionMismatch, ValidationError

small = st.integers(-4, 4)


# -- exact simplex --------------------------------------------------------------------------------

@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=2, max_size=3),
       st.lists(st.integers(0, 6), min_size=4, max_size=4),
       st.lists(st.integers(0, 5), min_size=4, max_size=4))
def test_simplex_matches_scipy(A, x0, c):
    # b = A x0 keeps the problem feasible; c >= 0 keeps it bounded
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    res = _lp.solve(A, b, c)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * 4, method="highs")
    assert res.status == "optimal" and ref.status == 0
    assert abs(float(res.value) - ref.fun) <= 1e-7
    assert all(sum(a * x for a, x in zip(row, res.x)) == bi for row, bi in zip(A, b))
    # weak duality with equality certifies optimality
    assert sum(y * bi for y, bi in zip(res.y, b)) == res.value


def test_simplex_detects_infeasible_and_unbounded():
    assert _lp.solve([[1, 1]], [-1], [0, 0]).status == "infeasible"
    assert _lp.solve([[1, -1]], [0], [-1, 0]).status == "unbounded"


# -- lattices --------------------------------------------------------------------------------------

def test_pairing_examples():
    assert intersect(point_lattice(), [1], [1]) == 1
    lat = blowup_lattice(3)
    H, E1, E2 = [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]
    assert intersect(lat, E1, E1) == -1 and intersect(lat, E1, E2) == 0
    assert intersect(lat, H, E1) == 0 and intersect(lat, H, H) == 1
    conic = [2, -1, -1, -1]
    assert intersect(lat, conic, conic) == 1


@pytest.mark.parametrize("m", range(9))
def test_blowup_signatures(m):
    assert hodge_signature(blowup_lattice(m).pairing) == (1, m, 0)


def test_signature_examples():
    assert hodge_signature([[1]]) == (1, 0, 0)
    assert hodge_signature([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]) == (1, 3, 0)
    assert hodge_signature([[0] * 3 for _ in range(3)]) == (0, 0, 3)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_signature_matches_numpy(M):
    S = [[M[i][j] + M[j][i] for j in range(4)] for i in range(4)]
    ev = np.linalg.eigvalsh(np.array(S, dtype=float))
    tol = 1e-9
    ref = (int((ev > tol).sum()), int((ev < -tol).sum()), int((abs(ev) <= tol).sum()))
    assert hodge_signature(S) == ref


def test_lattice_validation():
    with pytest.raises(DimensionMismatch):
        CycleLattice(1, ["H"], [[1]], [1, 0])
    with pytest.raises(ValidationError):
        CycleLattice(1, ["H", "E"], [[1, 0], [0, 0]], [1, 0])


# -- the norm ----------------------------------------------------------------------------------------

def norm_scipy(lat, v):
    """min deg(v1) + deg(v2) over cone coefficients, v = G a - G b."""
    G = np.array([[float(x) for x in g] for g in lat.effective_generators]).T
    d = [float(lat.degree(g)) for g in lat.effective_generators]
    A = np.hstack([G, -G])
    res = linprog(d + d, A_eq=A, b_eq=[float(x) for x in v],
                  bounds=[(0, None)] * (2 * len(d)), method="highs")
    return res.fun


def test_norm_examples():
    lat = blowup_lattice(1)
    assert norm_one(lat, [1, -1]).value == 1          # H - E1
    assert norm_one(lat, [0, 0]).value == 0
    assert norm_one(lat, [0, 1]).value == 1           # E1
    assert norm_one(lat, [1, 0]).value == 2           # H = (H - E1) + E1


@given(st.integers(1, 4), st.data())
def test_norm_matches_scipy(m, data):
    lat = blowup_lattice(m)
    v = data.draw(st.lists(small, min_size=m + 1, max_size=m + 1))
    res = norm_one(lat, v)
    assert abs(float(res.value) - norm_scipy(lat, v)) <= 1e-7
    # the certificate: v1 - v2 = v and the dual bound matches
    assert [a - b for a, b in zip(res.v1, res.v2)] == [Fraction(x) for x in v]
    assert sum(y * Fraction(x) for y, x in zip(res.dual, v)) == res.value


@given(st.lists(small, min_size=2, max_size=2), st.lists(small, min_size=2, max_size=2),
       st.fractions(-5, 5, max_denominator=7))
def test_norm_axioms(v, w, c):
    lat = blowup_lattice(1)
    n = lambda u: norm_one(lat, u).value  # noqa: E731
    assert n([c * x for x in v]) == abs(c) * n(v)
    assert n([a + b for a, b in zip(v, w)]) <= n(v) + n(w)


def test_norm_on_generators_is_degree():
    for m in range(4):
        lat = blowup_lattice(m)
        for g in lat.effective_generators:
            assert norm_one(lat, g).value == lat.degree(g)


# -- actions ----------------------------------------------------------------------------------------

def test_spectral_examples():
    assert spectral_data(PullbackAction({1: [[2]]}), 1).exact_radius == 2
    assert spectral_data(cremona_action(), 1).exact_radius == 1
    r = spectral_data(lehmer_action(), 1).radius
    assert 1.17627 <= r.lo <= r.hi <= 1.17629


def test_cremona_action_is_an_involution_preserving_the_form():
    M = np.array([[float(x) for x in r] for r in cremona_action().matrix(1)])
    Q = np.array([[float(x) for x in r] for r in blowup_lattice(3).pairing])
    assert np.allclose(M @ M, np.eye(4))
    assert np.allclose(M.T @ Q @ M, Q)


def test_lehmer_action_preserves_the_form():
    M = np.array([[float(x) for x in r] for r in lehmer_action().matrix(1)])
    assert M.shape == (11, 11)
    Q = np.diag([1.0] + [-1.0] * 10)
    assert np.allclose(M.T @ Q @ M, Q)


def test_simplicity_examples():
    assert simplicity_check(diagonal_action([2, 1]), 1).verdict == "PASS"
    assert simplicity_check(cremona_action(), 1).verdict == "HYPOTHESIS_NOT_MET"
    lehmer = simplicity_check(lehmer_action(), 1)
    assert lehmer.verdict == "PASS" and lehmer.simple
    assert lehmer.other_max_modulus.hi <= 1 + 1e-9


def test_simplicity_fails_on_double_dominant_root():
    assert simplicity_check(diagonal_action([2, 2]), 1).verdict == "FAIL"
    assert simplicity_check(diagonal_action([2, -2]), 1).verdict == "FAIL"


def test_cone_checks():
    trivial = point_lattice()
    rep = cone_preservation_r1r2_check(PullbackAction({1: [[2]], 2: [[4]]}), trivial)
    assert rep.inequality_holds and rep.verdict in ("PASS", "HYPOTHESIS_NOT_MET")
    mono = cone_preservation_r1r2_check(PullbackAction({1: [[2, 1], [1, 1]], 2: [[1]]}), trivial)
    assert mono.verdict == "PASS" and mono.r1.lo ** 2 >= 6.85
    with pytest.raises(ConeNotPreserved):
        cone_preservation_r1r2_check(PullbackAction({1: [[2]], 2: [[-1]]}), trivial)
