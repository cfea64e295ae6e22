"""Relative degrees along coordinate projections and the product formula.

A self-map f of X = Y x F (Y the first ``split`` factors) is triangular when
its Y-components involve only Y-variables; then pi(f) = g(pi) for the induced
map g of Y. Restricting a reduced iterate f^n to the fibre over a base point b
gives the fibre map F_b -> F_{g^n(b)} whose multidegree measures the relative
degree. Base points are random integers; two samples must agree, and a
sample with lower fibre degrees is treated as lying on a special fibre.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import _mpoly as mp
from .degseq import (DegreeSequence, UpperBound, _int_root_bound, bezout_number,
                     iterate_degrees, max_row_sum)
from .errors import (DegenerateFibers, NotTriangular, ShapeMismatch,
                     ValidationError, WitnessFailed, ZeroMap)
from .interval import Interval
from .monomial import ProductFormulaReport, compare_product_formula, spectral_report
from .polycore import (AmbientSpace, Polynomial, RationalMap, compose,
                       is_dominant, reduce_map, reduce_map_with_factors)


@dataclass
class SemiConjugacy:
    f: RationalMap
    split: int
    base: AmbientSpace
    fiber: AmbientSpace
    g: RationalMap
    witnessed: bool = False

    @property
    def base_dim(self) -> int:
        return self.base.total_dim

    @property
    def fiber_dim(self) -> int:
        return self.fiber.total_dim

    @property
    def base_nvars(self) -> int:
        return self.base.nvars


def projection(X: AmbientSpace, split: int) -> RationalMap:
    """The coordinate projection onto the first ``split`` factors."""
    Y = AmbientSpace(X.factors[:split])
    comps = [tuple(Polynomial.variable(X, i) for i in rng) for rng in X.blocks[:split]]
    return RationalMap(X, Y, comps, reduced=True)


def build_semiconjugacy(f: RationalMap, split: int) -> SemiConjugacy:
    X = f.source
    if f.target != X:
        raise ValidationError("need a self-map")
    if not 1 <= split < X.nblocks:
        raise ValidationError(f"split must lie in 1..{X.nblocks - 1}")
    f = reduce_map(f)
    Y = AmbientSpace(X.factors[:split])
    Fsp = AmbientSpace(X.factors[split:])
    ny = Y.nvars
    base_comps = []
    for i, tup in enumerate(f.components[:split]):
        new = []
        for p in tup:
            if any(any(e[ny:]) for e in p.terms):
                raise NotTriangular(f"base component tuple {i} involves fibre variables")
            new.append(Polynomial(Y, {e[:ny]: c for e, c in p.terms.items()}))
        base_comps.append(tuple(new))
    g = reduce_map(RationalMap(Y, Y, base_comps))
    pi = projection(X, split)
    lhs = reduce_map(compose(pi, f))
    rhs = reduce_map(compose(g, pi))
    if lhs != rhs:
        raise WitnessFailed("pi o f and g o pi differ")
    return SemiConjugacy(f=f, split=split, base=Y, fiber=Fsp, g=g, witnessed=True)


# -- fibre restriction ------------------------------------------------------------------

def random_base_point(Y: AmbientSpace, rng: random.Random, height: int = 1000) -> tuple[int, ...]:
    while True:
        pt = [rng.randint(-height, height) for _ in range(Y.nvars)]
        if all(any(pt[i] for i in rng_) for rng_ in Y.blocks):
            return tuple(pt)


def restrict_to_fiber(sc: SemiConjugacy, F: RationalMap, point: Sequence[int]) -> RationalMap:
    """The fibre tuples of F with base coordinates set to ``point`` (unreduced)."""
    ny = sc.base_nvars
    assignment = dict(enumerate(point))
    comps = []
    for tup in F.components[sc.split:]:
        new = []
        for p in tup:
            t = mp.partial_evaluate(p.terms, assignment)
            new.append(Polynomial(sc.fiber, {e[ny:]: c for e, c in t.items()}))
        comps.append(tuple(new))
    return RationalMap(sc.fiber, sc.fiber, comps)


def fiber_block(D, split: int):
    return tuple(tuple(r[split:]) for r in D[split:])


@dataclass
class FiberSample:
    point: tuple
    matrices: list              # per n = 1..N, fibre multidegree matrix or None
    degenerate_at: int | None = None


def _sample(sc, iterates, point):
    mats = []
    bad = None
    for n, F in enumerate(iterates[1:], start=1):
        try:
            restricted = restrict_to_fiber(sc, F, point)
            red = reduce_map(restricted)
        except ZeroMap:
            mats.append(None)
            bad = bad or n
            continue
        if n == 1 and not is_dominant(red):
            bad = bad or n
        mats.append(red.multidegree_matrix)
    return FiberSample(point, mats, bad)


def _dominates(a, b) -> bool:
    """Entrywise a >= b for matrix sequences (None counts as lowest)."""
    for x, y in zip(a, b):
        if y is None:
            continue
        if x is None:
            return False
        if any(x[i][j] < y[i][j] for i in range(len(x)) for j in range(len(x))):
            return False
    return True


# -- relative degrees -------------------------------------------------------------------

def segre_degree(factors: Sequence[int]) -> int:
    """Degree of the Segre embedding of prod P^{k_i}."""
    total = factorial(sum(factors))
    for k in factors:
        total //= factorial(k)
    return total


def relative_constant(sc: SemiConjugacy) -> int:
    """deg(Y) * l * deg(F)^l for the Segre-embedded base Y (dim l) and fibre F."""
    l = sc.base_dim
    return segre_degree(sc.base.factors) * l * segre_degree(sc.fiber.factors) ** l


@dataclass
class RelativeDegreeReport:
    p: int
    entries: list                   # deg_p(f^n | pi) for n = 0..N
    fiber_matrices: list            # agreed fibre multidegree matrices, n = 0..N
    lambda_rel: dict                # p -> Interval for p in {0, 1, top}
    lambda_bounds: dict             # p -> best UpperBound
    upper_bounds: list              # bounds for the requested p
    fiber_samples: list             # accepted base points
    rejected_samples: list          # base points judged degenerate
    oracle_agrees: bool             # fibre matrices equal the fibre block of D_n
    submult_constant: int           # constant used in the bounds (exact here)
    declared_constant: int          # deg(Y) l deg(F)^l
    submult_violations: list
    truncated: bool = False
    sequence: DegreeSequence | None = None
    sample_sequences: list = field(default_factory=list)

    @property
    def flag(self) -> str:
        return "HEURISTIC"     # genericity of the sampled fibres is not a proof


def _surrogate(M, factors, p):
    if p == 0:
        return 1
    if p == 1:
        return max_row_sum(M)
    return bezout_number(M, factors)


def _bounds_for(mats, factors, p, eps=1e-12):
    out = []
    for n, M in enumerate(mats):
        if n == 0:
            continue
        d = _surrogate(M, factors, p)
        out.append(_int_root_bound(n, "row_sum" if p == 1 else "bezout", d))
        if p == 1 and len(M) > 1:
            rep = spectral_report(M, eps)
            if rep.exact_radius is not None and rep.exact_radius.denominator == 1:
                out.append(_int_root_bound(n, "spectral", int(rep.exact_radius)))
            else:
                out.append(UpperBound(n, "spectral", rep.radius, rep.radius.root(n)))
    return out


def relative_degree_sequence(sc: SemiConjugacy, p: int = 1, n_max: int = 6,
                             seed: int = 0, rng: random.Random | None = None,
                             height: int = 1000, max_terms: int = 10 ** 6,
                             max_coeff_bits: int = 10 ** 4,
                             max_consecutive_degenerate: int = 3) -> RelativeDegreeReport:
    """Fibre degrees of f^n over sampled base points, with relative degree bounds.

    Supported codimensions: 0, 1 and the fibre dimension (top).
    """
    if not sc.witnessed:
        raise ValidationError("semi-conjugacy is not witnessed")
    top = sc.fiber_dim
    if not 0 <= p <= top:
        raise ValidationError(f"p must lie in 0..{top}")
    if p not in (0, 1, top):
        raise ValidationError("intermediate relative codimensions need cycle intersection; "
                              "use a monomial semi-conjugacy")
    rng = rng or random.Random(seed)
    seq = iterate_degrees(sc.f, n_max, max_terms=max_terms, max_coeff_bits=max_coeff_bits,
                          keep_iterates=True)
    iterates = seq.iterates
    samples = [_sample(sc, iterates, random_base_point(sc.base, rng, height)) for _ in range(2)]
    rejected = []
    consecutive_bad = 0
    while True:
        ok = [s for s in samples if s.degenerate_at is None]
        if len(ok) == 2 and samples[0].matrices == samples[1].matrices:
            break
        # the sample that is not entrywise maximal sits on a special fibre
        keep = []
        for i, s in enumerate(samples):
            other = samples[1 - i]
            lower = s.degenerate_at is not None or (
                s.matrices != other.matrices and not _dominates(s.matrices, other.matrices))
            if lower:
                rejected.append(s.point)
            else:
                keep.append(s)
        if len(keep) == 2:           # incomparable: drop both
            rejected.extend(s.point for s in keep)
            keep = []
        consecutive_bad += 1
        if consecutive_bad >= max_consecutive_degenerate:
            raise DegenerateFibers(
                f"{consecutive_bad} consecutive rounds of degenerate base points")
        while len(keep) < 2:
            keep.append(_sample(sc, iterates, random_base_point(sc.base, rng, height)))
        samples = keep
    mats = [tuple(tuple(int(i == j) for j in range(sc.fiber.nblocks))
                  for i in range(sc.fiber.nblocks))] + list(samples[0].matrices)
    oracle = all(fiber_block(D, sc.split) == M for D, M in zip(seq.entries, mats))
    factors = sc.fiber.factors
    entries = [_surrogate(M, factors, p) for M in mats]
    lam, best = {0: Interval(1.0, 1.0)}, {}
    one = UpperBound(0, "exact", 1, Interval(1.0, 1.0), Fraction(1))
    best[0] = one
    for q in sorted({1, top}):
        bounds = _bounds_for(mats, factors, q)
        b = min(bounds, key=lambda u: (u.interval.hi, u.interval.lo, u.n))
        lam[q] = b.interval
        best[q] = b
    upper = _bounds_for(mats, factors, p) if p else [one]
    violations = []
    N = len(entries) - 1
    for n in range(1, N + 1):
        for m in range(1, N + 1 - n):
            if entries[n + m] > entries[n] * entries[m]:
                violations.append((n, m))
    return RelativeDegreeReport(
        p=p, entries=entries, fiber_matrices=mats, lambda_rel=lam, lambda_bounds=best,
        upper_bounds=upper, fiber_samples=[s.point for s in samples],
        rejected_samples=rejected, oracle_agrees=oracle, submult_constant=1,
        declared_constant=relative_constant(sc), submult_violations=violations,
        truncated=seq.truncated, sequence=seq,
        sample_sequences=[s.matrices for s in samples])


def fiber_degree_sequence(sc: SemiConjugacy, point: Sequence[int], n_max: int,
                          iterates: list | None = None) -> list:
    """Fibre multidegree matrices over one explicit base point (n = 1..n_max)."""
    if iterates is None:
        iterates = iterate_degrees(sc.f, n_max, keep_iterates=True).iterates
    return _sample(sc, iterates, tuple(point)).matrices


# -- product formula and surface probe --------------------------------------------------------

def product_formula_verify(lambdas_f: Sequence, lambdas_g: Sequence, lambdas_rel: Sequence,
                           tol: float = 0.0) -> ProductFormulaReport:
    """Per-p comparison of lambda_p(f) with max_j lambda_j(g) lambda_{p-j}(f|pi)."""
    def iv(x):
        if isinstance(x, Interval):
            return x
        return Interval.point(Fraction(x))
    return compare_product_formula([iv(x) for x in lambdas_f], [iv(x) for x in lambdas_g],
                                   [iv(x) for x in lambdas_rel], tol)


@dataclass
class ProbeReport:
    verdict: str
    lambda1: Interval
    lambda2: Interval


def surface_primitivity_probe(sc: SemiConjugacy | None, lambdas: Sequence,
                              tol: float = 1e-9) -> ProbeReport:
    """A surface fibred over a curve must have lambda_2 >= lambda_1."""
    if sc is not None and (sc.fiber_dim != 1 or sc.base_dim != 1):
        raise ShapeMismatch("probe needs a surface fibred over a curve")
    vals = [x if isinstance(x, Interval) else Interval.point(Fraction(x)) for x in lambdas]
    if len(vals) == 2:
        l1, l2 = vals
    elif len(vals) == 3:
        _, l1, l2 = vals
    else:
        raise ShapeMismatch("need (lambda_1, lambda_2) or (lambda_0, lambda_1, lambda_2)")
    ok = Fraction(l2.hi) >= Fraction(l1.lo) - Fraction(tol)
    return ProbeReport("CONSISTENT" if ok else "CONTRADICTS_FIBRATION", l1, l2)


def threefold_top_formula(lambda3_f, lambda1_g, lambda2_rel, tol: float = 0.0) -> bool:
    """lambda_3(f) = lambda_1(g) lambda_2(f|pi) for a threefold over a curve."""
    def iv(x):
        return x if isinstance(x, Interval) else Interval.point(Fraction(x))
    rhs = iv(lambda1_g) * iv(lambda2_rel)
    return iv(lambda3_f).distance(rhs) <= tol


def fiber_factor_report(sc: SemiConjugacy, F: RationalMap, point) -> tuple:
    """Common factors removed when restricting F to the fibre over ``point``."""
    return reduce_map_with_factors(restrict_to_fiber(sc, F, point))[1]
