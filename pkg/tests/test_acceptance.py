"""Acceptance criteria, each at its stated tolerance."""
import json
import random
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy

from acceptance_log import record
from dyndeg import (AmbientSpace, MonomialMap, MonomialSemiConjugacy, blowup_lattice,
                    conjugate_map, cremona_action, degree_table, hodge_signature,
                    iterate_degrees, lambda_estimate, lehmer_action, monomial_to_rational_map,
                    norm_one, parse_map, product_formula_check, simplicity_check)
from dyndeg.cli import dumps
from dyndeg.monomial import det, monomial_dynamical_degree_values
from dyndeg.relative import build_semiconjugacy, fiber_degree_sequence, random_base_point
from dyndeg.suites import SKEW_PRODUCTS, run_suite, skew_product_formula

GOLDEN = Path(__file__).parent / "golden" / "cremona_degrees.txt"
P2 = AmbientSpace.projective(2)
SIGMA = "[x1*x2 : x0*x2 : x0*x1]"
POWER = "[x0^2 : x1^2 : x2^2]"
SEED = 20240601


def rand_invertible(rng, k, lo, hi):
    while True:
        A = [[rng.randint(lo, hi) for _ in range(k)] for _ in range(k)]
        if det(A) != 0:
            return A


def test_criterion_01_oracle_vs_symbolic():
    rng = random.Random(SEED)
    start = time.perf_counter()
    bad = []
    for _ in range(10):
        A = rand_invertible(rng, 2, 0, 3)
        seq = iterate_degrees(monomial_to_rational_map(MonomialMap(A), "p1"), 6)
        for n, D in enumerate(seq.entries):
            if not np.array_equal(np.array(D), np.linalg.matrix_power(np.array(A), n)):
                bad.append((A, n))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    assert record(1, "D_n = A^n on (P^1)^2 for 10 matrices, n <= 6", ok, f"{elapsed:.2f}s")


def test_criterion_02_lambda_convergence():
    cases = {((2, 1), (1, 1)): (3 + sympy.sqrt(5)) / 2, ((1, 1), (1, 0)): (1 + sympy.sqrt(5)) / 2}
    worst = worst_row = 0.0
    ok = True
    for A, rho in cases.items():
        rep = lambda_estimate(iterate_degrees(monomial_to_rational_map(MonomialMap(A), "p1"), 10))
        best10 = min((b for b in rep.upper_bounds if b.n <= 10), key=lambda b: b.interval.hi)
        row10 = next(b for b in rep.upper_bounds if b.n == 10 and b.kind == "row_sum")
        rho_f = float(sympy.N(rho, 30))
        rel = (best10.interval.hi - rho_f) / rho_f
        rel_row = (row10.interval.hi - rho_f) / rho_f
        worst, worst_row = max(worst, rel), max(worst_row, rel_row)
        ok = ok and -1e-12 <= rel <= 0.05 and 0 <= rel_row <= 0.05
    assert record(2, "best bound at n = 10 within 5% of rho(A)", ok,
                  f"max excess {worst:.4f}, row-sum bound alone {worst_row:.4f}")


def test_criterion_03_log_concavity():
    rng = random.Random(SEED + 3)
    tol = Fraction(1, 10 ** 9)
    failures = 0
    for _ in range(50):
        k = rng.randint(1, 4)
        A = rand_invertible(rng, k, -3, 3)
        vals = monomial_dynamical_degree_values(MonomialMap(A))
        lam = [v.interval for v in vals]
        ok = vals[0].exact == 1 and all(Fraction(iv.lo) >= 1 - tol for iv in lam)
        for p in range(1, k):
            ok = ok and Fraction(lam[p].lo) ** 2 >= Fraction(lam[p - 1].hi) * Fraction(lam[p + 1].hi) - tol
        # numpy cross-check of the values themselves
        mods = sorted(np.abs(np.linalg.eigvals(np.array(A, dtype=float))), reverse=True)
        for p, iv in enumerate(lam):
            ref = float(np.prod(mods[:p]))
            ok = ok and abs(ref - iv.lo) <= 1e-6 * ref
        failures += not ok
    assert record(3, "log-concavity on 50 random matrices, k <= 4", failures == 0,
                  f"{failures} failures")


def test_criterion_04_submultiplicativity():
    res = run_suite("submultiplicativity", SEED)["results"]["submultiplicativity"]
    extra = []
    for text in (SIGMA, POWER, "[x1*x2 : x1^2 + 2*x0*x2 : x2^2]", "[x0^2 : x1*x2 + x0^2 : x2^2 + x0*x1]"):
        seq = iterate_degrees(parse_map(text, P2), 5)
        extra.append(seq.submultiplicativity_violations())
    ok = res["passed"] and all(v == [] for v in extra)
    assert record(4, "d_{n+m} <= d_n d_m exactly on every computed sequence", ok,
                  f"{len(res['cases']) + len(extra)} sequences")


def test_criterion_05_cremona_golden():
    seq = iterate_degrees(parse_map(SIGMA, P2), 6)
    table = degree_table(seq)
    ok = table.encode() == GOLDEN.read_bytes()
    ok = ok and seq.degrees == [1, 2, 1, 2, 1, 2, 1]
    assert record(5, "Cremona involution matches the golden table", ok)


def test_criterion_06_conjugacy_invariance():
    rng = random.Random(SEED + 6)
    bad = 0
    for text in (SIGMA, POWER):
        f = parse_map(text, P2)
        base = iterate_degrees(f, 5).entries
        for _ in range(5):
            L = rand_invertible(rng, 3, -3, 3)
            bad += iterate_degrees(conjugate_map(f, [L]), 5).entries != base
    assert record(6, "degree sequences invariant under 5 random conjugators", bad == 0,
                  f"{bad} mismatches")


def test_criterion_07_product_formula():
    rng = random.Random(SEED + 7)
    shapes = [(2, 1), (2, 2), (1, 2)]
    bad = 0
    for i in range(20):
        l, m = shapes[i % 3]
        k = l + m
        while True:
            A = [[0 if i_ < l <= j else rng.randint(-3, 3) for j in range(k)] for i_ in range(k)]
            if det(A) != 0:
                break
        bad += not product_formula_check(MonomialSemiConjugacy.block_triangular(A, l)).passed
    skew = skew_product_formula(8)
    l1 = skew["lambda_f"][1]
    l2 = skew["lambda_f"][2]
    within = abs(l1["hi"] - 2) <= 1e-2 and abs(l2["hi"] - 4) <= 1e-2
    ok = bad == 0 and skew["passed"] and within
    assert record(7, "product formula on 20 block-triangular matrices and the skew product", ok,
                  f"lambda_1 = {l1['hi']}, lambda_2 = {l2['hi']}")


def test_criterion_08_relative_well_defined():
    rng = random.Random(SEED + 8)
    X = AmbientSpace.product(1, 1)
    ok = True
    for text in SKEW_PRODUCTS.values():
        sc = build_semiconjugacy(parse_map(text, X), 1)
        its = iterate_degrees(sc.f, 6, keep_iterates=True).iterates
        a = fiber_degree_sequence(sc, random_base_point(sc.base, rng), 6, its)
        b = fiber_degree_sequence(sc, random_base_point(sc.base, rng), 6, its)
        ok = ok and a == b and None not in a
    assert record(8, "two random base points agree on 3 named skew products, n <= 6", ok,
                  ", ".join(SKEW_PRODUCTS))


def test_criterion_09_hodge_signature():
    sigs = [hodge_signature(blowup_lattice(m).pairing) for m in range(6)]
    ok = sigs == [(1, m, 0) for m in range(6)]
    assert record(9, "blowup lattices m = 0..5 have inertia (1, m, 0)", ok)


def test_criterion_10_simplicity():
    lehmer = simplicity_check(lehmer_action(), 1)
    cremona = simplicity_check(cremona_action(), 1)
    r1 = lehmer.r1
    ok = (1.17627 <= r1.lo and r1.hi <= 1.17629 and lehmer.simple
          and lehmer.other_max_modulus.hi <= 1 + 1e-9 and lehmer.verdict == "PASS"
          and cremona.verdict == "HYPOTHESIS_NOT_MET")
    assert record(10, "Lehmer action PASS, Cremona action HYPOTHESIS_NOT_MET", ok,
                  f"r1 in [{r1.lo!r}, {r1.hi!r}]")


def test_criterion_11_norm_axioms():
    rng = random.Random(SEED + 11)
    lat = blowup_lattice(1)
    norm = lambda v: norm_one(lat, v).value  # noqa: E731
    bad = 0
    for _ in range(100):
        v = [rng.randint(-8, 8) for _ in range(2)]
        w = [rng.randint(-8, 8) for _ in range(2)]
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        bad += norm([c * x for x in v]) != abs(c) * norm(v)
        bad += norm([a + b for a, b in zip(v, w)]) > norm(v) + norm(w)
    gens_ok = all(norm(g) == lat.degree(g) for g in lat.effective_generators)
    assert record(11, "norm homogeneity and triangle inequality on 100 vectors", bad == 0 and gens_ok,
                  f"{bad} violations")


def test_criterion_12_determinism():
    first = dumps(run_suite("all", SEED))
    second = dumps(run_suite("all", SEED))
    summary = json.loads(first)["summary"]
    ok = first.encode() == second.encode() and all(v == "PASS" for v in summary.values())
    assert record(12, "suite reruns with the same seed are byte-identical", ok,
                  f"{len(first)} bytes")
