"""Named property suites. Each is deterministic in its seed.

A suite returns a plain dict with ``passed`` and per-case details, ready for
JSON serialisation. All random choices come from one ``random.Random(seed)``.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .cyclelat import (blowup_lattice, cremona_action, hodge_signature,
                       lehmer_action, norm_one, simplicity_check)
from .degseq import (conjugate_map, iterate_degrees, lambda_estimate,
                     stability_check)
from .errors import UnknownSuite
from .interval import Interval
from .monomial import (MonomialMap, MonomialSemiConjugacy, det, matpow,
                       monomial_dynamical_degree_values, monomial_to_rational_map,
                       product_formula_check, spectral_report)
from .polycore import AmbientSpace, format_polynomial, parse_map
from .relative import (build_semiconjugacy, fiber_degree_sequence,
                       product_formula_verify, random_base_point,
                       relative_degree_sequence)

CREMONA = "[x1*x2 : x0*x2 : x0*x1]"
POWER_P2 = "[x0^2 : x1^2 : x2^2]"
SKEW_PRODUCTS = {
    "linear-fiber": "[x0^2 : x1^2] ; [x0*y0 : x1*y1]",
    "power-fiber": "[x0 : x1] ; [y0^2 : y1^2]",
    "skew-quadratic": "[x0^2 : x1^2] ; [x0*y0^2 : x1*y1^2]",
}


def interval_dict(iv: Interval, exact=None) -> dict:
    d = {"lo": iv.lo, "hi": iv.hi}
    if exact is not None:
        d["exact"] = str(exact)
        d["flag"] = "EXACT"
    else:
        d["flag"] = "CERTIFIED_INTERVAL"
    return d


def matrix_list(D):
    return [list(r) for r in D]


def random_det_nonzero(rng, k, lo, hi):
    while True:
        A = [[rng.randint(lo, hi) for _ in range(k)] for _ in range(k)]
        if det(A) != 0:
            return A


# -- suites -----------------------------------------------------------------------------

def suite_oracle_vs_symbolic(seed: int) -> dict:
    rng = random.Random(seed)
    cases = []
    for _ in range(10):
        A = random_det_nonzero(rng, 2, 0, 3)
        f = monomial_to_rational_map(MonomialMap(A), "p1")
        seq = iterate_degrees(f, 6)
        ok = all(matrix_list(seq.entries[n]) == matpow(A, n) for n in range(7))
        cases.append({"A": A, "passed": ok, "D_6": matrix_list(seq.entries[-1])})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def suite_lambda_convergence(seed: int) -> dict:
    cases = []
    for A in ([[2, 1], [1, 1]], [[1, 1], [1, 0]]):
        rho = spectral_report(A)
        seq = iterate_degrees(monomial_to_rational_map(MonomialMap(A), "p1"), 10)
        rep = lambda_estimate(seq)
        row10 = next(b for b in rep.upper_bounds if b.n == 10 and b.kind == "row_sum")
        best10 = min((b for b in rep.upper_bounds if b.n <= 10), key=lambda b: b.interval.hi)
        rel = (row10.interval.hi - rho.radius.lo) / rho.radius.lo
        ok = 0 <= rel <= 0.05 and best10.interval.hi >= rho.radius.lo
        cases.append({"A": A, "rho": interval_dict(rho.radius), "row_sum_bound_n10": row10.as_dict(),
                      "best_bound": best10.as_dict(), "relative_excess": rel,
                      "certified": rep.certified, "passed": ok})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def suite_log_concavity(seed: int) -> dict:
    rng = random.Random(seed)
    tol = 1e-9
    cases = []
    for _ in range(50):
        k = rng.randint(1, 4)
        A = random_det_nonzero(rng, k, -3, 3)
        vals = monomial_dynamical_degree_values(MonomialMap(A))
        lam = [v.interval for v in vals]
        ok = vals[0].exact == 1 and all(iv.lo >= 1 - tol for iv in lam)
        residuals = []
        for p in range(1, k):
            lhs = Fraction(lam[p].lo) ** 2
            rhs = Fraction(lam[p - 1].hi) * Fraction(lam[p + 1].hi)
            residuals.append(float(lhs - rhs))
            ok = ok and lhs >= rhs - Fraction(tol)
        cases.append({"A": A, "lambda": [v.as_dict() for v in vals],
                      "residuals": residuals, "passed": ok})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def _submult_maps(rng):
    P2 = AmbientSpace.projective(2)
    maps = [("cremona", parse_map(CREMONA, P2), 8), ("power", parse_map(POWER_P2, P2), 6),
            ("henon", parse_map("[x1*x2 : x1^2 + 2*x0*x2 : x2^2]", P2), 5)]
    for name, txt in SKEW_PRODUCTS.items():
        maps.append((name, parse_map(txt, AmbientSpace.product(1, 1)), 8))
    for i in range(3):
        A = random_det_nonzero(rng, 2, 0, 3)
        maps.append((f"monomial-{i}", monomial_to_rational_map(MonomialMap(A), "p1"), 6))
    A = random_det_nonzero(rng, 2, -2, 2)
    maps.append(("monomial-projective", monomial_to_rational_map(MonomialMap(A), "projective"), 6))
    return maps


def suite_submultiplicativity(seed: int) -> dict:
    rng = random.Random(seed)
    cases = []
    for name, f, n in _submult_maps(rng):
        seq = iterate_degrees(f, n)
        bad = seq.submultiplicativity_violations()
        cases.append({"map": name, "n_max": seq.n_max, "degrees": seq.degrees,
                      "violations": [list(x) for x in bad], "passed": not bad})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def suite_cremona(seed: int) -> dict:
    f = parse_map(CREMONA, AmbientSpace.projective(2))
    seq = iterate_degrees(f, 6)
    rep = lambda_estimate(seq)
    st = stability_check(seq)
    degrees = seq.degrees
    factor = " ; ".join(format_polynomial(p) for p in st.common_factor) if st.common_factor else None
    ok = (degrees == [1, 2, 1, 2, 1, 2, 1] and rep.best.exact == 1
          and st.first_instability == 2 and factor == "x0*x1*x2")
    return {"passed": ok, "degrees": degrees, "lambda_1": rep.best.as_dict(),
            "first_instability": st.first_instability, "common_factor": factor,
            "verdict": st.verdict}


def suite_conjugacy_invariance(seed: int) -> dict:
    rng = random.Random(seed)
    P2 = AmbientSpace.projective(2)
    cases = []
    for name, txt in (("cremona", CREMONA), ("power", POWER_P2)):
        f = parse_map(txt, P2)
        base = iterate_degrees(f, 5).entries
        for _ in range(5):
            L = random_det_nonzero(rng, 3, -3, 3)
            conj = iterate_degrees(conjugate_map(f, [L]), 5).entries
            cases.append({"map": name, "L": L, "degrees": [r[0][0] for r in conj],
                          "passed": conj == base})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def random_block_triangular(rng, l, m):
    k = l + m
    while True:
        A = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                if i < l and j >= l:
                    continue
                A[i][j] = rng.randint(-3, 3)
        if det(A) != 0:
            return A


def skew_product_formula(n_max: int = 8, txt: str = SKEW_PRODUCTS["skew-quadratic"],
                         seed: int = 0) -> dict:
    X = AmbientSpace.product(1, 1)
    f = parse_map(txt, X)
    seq = iterate_degrees(f, n_max)
    l1 = lambda_estimate(seq, codim=1)
    l2 = lambda_estimate(seq, codim=2)
    sc = build_semiconjugacy(f, 1)
    lg = lambda_estimate(iterate_degrees(sc.g, n_max), codim=1)
    rel = relative_degree_sequence(sc, 1, n_max, seed=seed)
    lf = [Interval(1.0, 1.0), l1.best_estimate, l2.best_estimate]
    lgv = [Interval(1.0, 1.0), lg.best_estimate]
    lr = [rel.lambda_rel[0], rel.lambda_rel[1]]
    pf = product_formula_verify(lf, lgv, lr, tol=1e-2)
    return {"lambda_f": [interval_dict(x) for x in lf], "lambda_g": [interval_dict(x) for x in lgv],
            "lambda_rel": [interval_dict(x) for x in lr], "rhs": [interval_dict(x) for x in pf.rhs],
            "residuals": pf.residuals, "lambda1_f": l1.best.as_dict(), "lambda2_f": l2.best.as_dict(),
            "passed": pf.passed and abs(l1.best_estimate.hi - 2) <= 1e-2
            and abs(l2.best_estimate.hi - 4) <= 1e-2}


def suite_product_formula(seed: int) -> dict:
    rng = random.Random(seed)
    cases = []
    shapes = [(2, 1), (2, 2), (1, 2)]
    for i in range(20):
        l, m = shapes[i % 3]
        A = random_block_triangular(rng, l, m)
        rep = product_formula_check(MonomialSemiConjugacy.block_triangular(A, l))
        cases.append({"A": A, "split": [l, m], "lambda_f": [interval_dict(x) for x in rep.lambda_f],
                      "rhs": [interval_dict(x) for x in rep.rhs], "residuals": rep.residuals,
                      "passed": rep.passed})
    skew = skew_product_formula(8, seed=seed)
    return {"passed": all(c["passed"] for c in cases) and skew["passed"],
            "monomial_cases": cases, "skew_product": skew}


def suite_relative_well_defined(seed: int) -> dict:
    rng = random.Random(seed)
    X = AmbientSpace.product(1, 1)
    cases = []
    for name, txt in SKEW_PRODUCTS.items():
        sc = build_semiconjugacy(parse_map(txt, X), 1)
        iterates = iterate_degrees(sc.f, 6, keep_iterates=True).iterates
        pts = [random_base_point(sc.base, rng) for _ in range(2)]
        seqs = [fiber_degree_sequence(sc, p, 6, iterates) for p in pts]
        cases.append({"map": name, "points": [list(p) for p in pts],
                      "fiber_degrees": [[None if m is None else matrix_list(m) for m in s]
                                        for s in seqs],
                      "passed": seqs[0] == seqs[1] and None not in seqs[0]})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def suite_hodge_signature(seed: int) -> dict:
    cases = []
    for m in range(6):
        sig = hodge_signature(blowup_lattice(m).pairing)
        cases.append({"m": m, "signature": list(sig), "passed": sig == (1, m, 0)})
    return {"passed": all(c["passed"] for c in cases), "cases": cases}


def suite_simplicity(seed: int) -> dict:
    lehmer = simplicity_check(lehmer_action(), 1)
    cremona = simplicity_check(cremona_action(), 1)
    r1 = lehmer.r1
    others_ok = lehmer.other_max_modulus is not None and lehmer.other_max_modulus.hi <= 1 + 1e-9
    ok_l = (lehmer.verdict == "PASS" and 1.17627 <= r1.lo and r1.hi <= 1.17629
            and lehmer.simple and others_ok)
    return {"passed": ok_l and cremona.verdict == "HYPOTHESIS_NOT_MET",
            "lehmer": {"verdict": lehmer.verdict, "r1": interval_dict(r1),
                       "simple": lehmer.simple,
                       "other_max_modulus": interval_dict(lehmer.other_max_modulus),
                       "char_poly": lehmer.spectrum.char_poly},
            "cremona": {"verdict": cremona.verdict,
                        "r1": interval_dict(cremona.r1, cremona.spectrum.exact_radius)}}


def suite_norm_axioms(seed: int) -> dict:
    rng = random.Random(seed)
    lat = blowup_lattice(1)
    failures = []
    for i in range(100):
        v = [rng.randint(-6, 6) for _ in range(2)]
        w = [rng.randint(-6, 6) for _ in range(2)]
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        nv, nw = norm_one(lat, v).value, norm_one(lat, w).value
        nvw = norm_one(lat, [a + b for a, b in zip(v, w)]).value
        ncv = norm_one(lat, [c * a for a in v]).value
        if ncv != abs(c) * nv or nvw > nv + nw or (nv == 0) != (v == [0, 0]):
            failures.append({"v": v, "w": w, "c": str(c)})
    gens = [{"generator": [str(x) for x in g], "norm": str(norm_one(lat, g).value),
             "degree": str(lat.degree(g))} for g in lat.effective_generators]
    gen_ok = all(g["norm"] == g["degree"] for g in gens)
    return {"passed": not failures and gen_ok, "samples": 100, "failures": failures,
            "generators": gens}


SUITES = {
    "oracle-vs-symbolic": suite_oracle_vs_symbolic,
    "lambda-convergence": suite_lambda_convergence,
    "log-concavity": suite_log_concavity,
    "submultiplicativity": suite_submultiplicativity,
    "cremona": suite_cremona,
    "conjugacy-invariance": suite_conjugacy_invariance,
    "product-formula": suite_product_formula,
    "relative-well-defined": suite_relative_well_defined,
    "hodge-signature": suite_hodge_signature,
    "simplicity": suite_simplicity,
    "norm-axioms": suite_norm_axioms,
}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run one named suite (or "all") and return its summary."""
    if name == "all":
        results = {n: fn(seed) for n, fn in SUITES.items()}
        return {"suite": "all", "seed": seed,
                "passed": all(r["passed"] for r in results.values()),
                "summary": {n: ("PASS" if r["passed"] else "FAIL") for n, r in results.items()},
                "results": results}
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; available: all, {', '.join(SUITES)}")
    res = SUITES[name](seed)
    return {"suite": name, "seed": seed, "passed": res["passed"],
            "summary": {name: "PASS" if res["passed"] else "FAIL"}, "results": {name: res}}
