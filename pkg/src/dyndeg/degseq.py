"""Degree sequences of iterates and certified upper bounds for dynamical degrees.

For a self-map of a product of projective spaces the multidegree matrix D_n of
the reduced n-th iterate has rows indexed by target factors and columns by
source blocks. Degree data is submultiplicative, D_{n+m} <= D_n D_m
entrywise, which gives rigorous upper bounds at every finite n:

* first degree: (C * maxrowsum(D_n))^(1/n) and rho(D_n)^(1/n);
* top degree: B(D_n)^(1/n) with B the multihomogeneous Bezout number, since
  the topological degree is multiplicative and bounded by B.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import EmptySequence, ResourceLimit, SingularMatrix, ValidationError
from .interval import Interval, iroot_exact
from .monomial import identity, matmul, spectral_report
from .polycore import (RationalMap, compose, format_polynomial,
                       reduce_map, reduce_map_with_factors)


@dataclass
class DegreeSequence:
    """Multidegree matrices D_0..D_N of the reduced iterates of one map."""

    map: RationalMap
    entries: list                                   # list of r x r tuples
    factor_removed: list = field(default_factory=list)   # per n: bool
    common_factors: list = field(default_factory=list)   # per n: tuple of Polynomial
    truncated: bool = False
    truncation_reason: str | None = None
    iterates: list | None = None                    # reduced F_n when kept
    max_terms_seen: int = 0
    max_coeff_bits_seen: int = 0

    @property
    def n_max(self) -> int:
        return len(self.entries) - 1

    @property
    def reduced(self) -> list[bool]:
        return [True] * len(self.entries)

    @property
    def is_scalar(self) -> bool:
        return len(self.entries[0]) == 1

    @property
    def degrees(self) -> list[int]:
        """Scalar degrees (P^k) or max row sums (products)."""
        return [max_row_sum(D) for D in self.entries]

    @property
    def stability_horizon(self) -> int:
        return stability_horizon(self.entries)

    def submultiplicativity_violations(self) -> list[tuple[int, int]]:
        """All (n, m) with D_{n+m} not <= D_n D_m entrywise (exact)."""
        bad = []
        N = self.n_max
        for n in range(N + 1):
            for m in range(N + 1 - n):
                P = matmul([list(r) for r in self.entries[n]], [list(r) for r in self.entries[m]])
                D = self.entries[n + m]
                if any(D[i][j] > P[i][j] for i in range(len(D)) for j in range(len(D))):
                    bad.append((n, m))
        return bad


def max_row_sum(D) -> int:
    return max(sum(r) for r in D)


def _mat(D):
    return tuple(tuple(int(x) for x in r) for r in D)


def stability_horizon(entries) -> int:
    """Largest n such that D_m = D_1^m for every m <= n."""
    if len(entries) < 2:
        return 0
    D1 = [list(r) for r in entries[1]]
    P = identity(len(D1))
    h = 0
    for n in range(1, len(entries)):
        P = matmul(P, D1)
        if _mat(P) != _mat(entries[n]):
            break
        h = n
    return h


def iterate_degrees(f: RationalMap, n_max: int, max_terms: int = 10 ** 6,
                    max_coeff_bits: int = 10 ** 4, keep_iterates: bool = False,
                    strict: bool = False) -> DegreeSequence:
    """Multidegree matrices of reduce(f^n) for n = 0..n_max.

    When an iterate exceeds ``max_terms`` terms or ``max_coeff_bits`` bits per
    coefficient the sequence stops there and is marked truncated; with
    ``strict=True`` a ResourceLimit carrying the partial sequence is raised.
    """
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    if f.source != f.target:
        raise ValidationError("iterate_degrees needs a self-map")
    r = f.source.nblocks
    F, first_factors = reduce_map_with_factors(f)
    seq = DegreeSequence(map=F, entries=[_mat(identity(r)), F.multidegree_matrix],
                         factor_removed=[False, any(not p.is_constant() for p in first_factors)],
                         common_factors=[(), first_factors],
                         iterates=[RationalMap.identity(f.source), F] if keep_iterates else None)
    seq.max_terms_seen = F.nterms
    seq.max_coeff_bits_seen = F.max_coeff_bits()
    cur = F
    for n in range(2, n_max + 1):
        raw = compose(F, cur)
        reason = _over_cap(raw, max_terms, max_coeff_bits)
        if reason is None:
            cur, factors = reduce_map_with_factors(raw)
            reason = _over_cap(cur, max_terms, max_coeff_bits)
        if reason is not None:
            seq.truncated = True
            seq.truncation_reason = f"n={n}: {reason}"
            if strict:
                raise ResourceLimit(seq.truncation_reason, partial=seq)
            break
        seq.max_terms_seen = max(seq.max_terms_seen, raw.nterms)
        seq.max_coeff_bits_seen = max(seq.max_coeff_bits_seen, raw.max_coeff_bits())
        seq.entries.append(cur.multidegree_matrix)
        seq.factor_removed.append(any(not p.is_constant() for p in factors))
        seq.common_factors.append(factors)
        if keep_iterates:
            seq.iterates.append(cur)
    return seq


def _over_cap(g: RationalMap, max_terms, max_bits):
    t = g.nterms
    if t > max_terms:
        return f"term count {t} exceeds cap {max_terms}"
    b = g.max_coeff_bits()
    if b > max_bits:
        return f"coefficient bit-length {b} exceeds cap {max_bits}"
    return None


# -- bounds ----------------------------------------------------------------------

def bound_constant(k: int, deg_X: int, exact_submultiplicative: bool = False) -> int:
    """Submultiplicativity constant k * deg_X^k for a degree deg_X k-fold.

    Returns 1 when the caller certifies exact submultiplicativity, as on P^k
    and products of projective spaces.
    """
    if k < 1 or deg_X < 1:
        raise ValidationError("need k >= 1 and deg_X >= 1")
    if exact_submultiplicative:
        return 1
    return k * deg_X ** k


def bezout_number(D, factors: Sequence[int]) -> int:
    """Coefficient of prod h_j^{k_j} in prod_i (sum_j D[i][j] h_j)^{k_i}.

    This is the number of solutions of a generic system with the given
    multidegrees, hence an upper bound for the topological degree.
    """
    r = len(factors)
    target = tuple(factors)
    poly = {(0,) * r: 1}
    for i, k in enumerate(factors):
        for _ in range(k):
            nxt = {}
            for e, c in poly.items():
                for j in range(r):
                    if D[i][j] and e[j] < target[j]:
                        e2 = e[:j] + (e[j] + 1,) + e[j + 1:]
                        nxt[e2] = nxt.get(e2, 0) + c * D[i][j]
            poly = nxt
    return poly.get(target, 0)


def top_degree_bound(D, factors: Sequence[int]) -> int:
    return bezout_number(D, factors)


@dataclass
class UpperBound:
    """An upper bound value^(1/n) for a dynamical degree."""

    n: int
    kind: str               # "row_sum", "spectral" or "bezout"
    radicand: object        # exact int, or Interval for spectral radii
    interval: Interval
    exact: Fraction | None = None

    @property
    def flag(self) -> str:
        return "EXACT" if self.exact is not None else "CERTIFIED_INTERVAL"

    def as_dict(self) -> dict:
        d = {"n": self.n, "kind": self.kind, "flag": self.flag,
             "lo": self.interval.lo, "hi": self.interval.hi}
        if isinstance(self.radicand, int):
            d["radicand"] = self.radicand
        if self.exact is not None:
            d["exact"] = str(self.exact)
        return d


def _int_root_bound(n, kind, value) -> UpperBound:
    r = iroot_exact(value, n)
    if r is not None:
        return UpperBound(n, kind, value, Interval.point(r), Fraction(r))
    return UpperBound(n, kind, value, Interval.point(value).root(n))


@dataclass
class LambdaReport:
    """Upper bounds for one dynamical degree from a degree sequence."""

    codim: int
    upper_bounds: list          # list[UpperBound]
    best: UpperBound | None
    best_estimate: Interval
    submult_constant: int
    ratios: list                # exact Fractions d_{n+1}/d_n of the row-sum surrogate
    ratio_estimate: float | None
    certified: bool
    truncated: bool = False

    @property
    def value_flag(self) -> str:
        return self.best.flag if self.best is not None else "EXACT"

    @property
    def ratio_flag(self) -> str:
        return "HEURISTIC"


Lambda1Report = LambdaReport


def lambda_estimate(seq: DegreeSequence, C: int = 1, codim: int = 1,
                    tol: float = 1e-2, spectral: bool = True,
                    eps: float = 1e-12) -> LambdaReport:
    """Certified upper bounds for lambda_codim from a computed sequence.

    codim 0 gives exactly 1, codim 1 uses (C * maxrowsum(D_n))^(1/n) plus, for
    matrix sequences, rho(D_n)^(1/n); codim = dim uses Bezout numbers. Other
    codimensions need cycle intersection and are not supported here.
    """
    if seq is None or len(seq.entries) < 2:
        raise EmptySequence("degree sequence has no iterates")
    if C < 1:
        raise ValidationError("C must be >= 1")
    factors = seq.map.source.factors
    k = sum(factors)
    one = UpperBound(0, "exact", 1, Interval(1.0, 1.0), Fraction(1))
    if codim == 0:
        return LambdaReport(0, [one], one, one.interval, 1, [], 1.0, True, seq.truncated)
    if codim not in (1, k):
        raise ValidationError(f"codimension {codim} is only available through the "
                              "monomial and relative modules")
    bounds: list[UpperBound] = []
    surrogate = []
    for n in range(1, len(seq.entries)):
        D = seq.entries[n]
        if codim == 1:
            d = max_row_sum(D)
            surrogate.append(d)
            bounds.append(_int_root_bound(n, "row_sum", C * d))
            if spectral and len(D) > 1:
                rep = spectral_report(D, eps)
                if rep.exact_radius is not None and rep.exact_radius.denominator == 1:
                    bounds.append(_int_root_bound(n, "spectral", int(rep.exact_radius)))
                else:
                    iv = rep.radius.root(n)
                    bounds.append(UpperBound(n, "spectral", rep.radius, iv))
        else:
            b = bezout_number(D, factors)
            surrogate.append(b)
            bounds.append(_int_root_bound(n, "bezout", C * b if C > 1 else b))
    best = min(bounds, key=lambda b: (b.interval.hi, b.interval.lo, b.n))
    ratios = [Fraction(surrogate[i + 1], surrogate[i]) for i in range(len(surrogate) - 1)]
    ratio_est = float(ratios[-1]) if ratios else None
    certified = False
    if len(ratios) >= 3:
        last = ratios[-3:]
        ref = last[-1]
        certified = all(abs(x - ref) <= Fraction(tol) * ref for x in last)
    return LambdaReport(codim, bounds, best, best.interval, C, ratios, ratio_est,
                        certified, seq.truncated)


# -- stability -------------------------------------------------------------------------

@dataclass
class StabilityReport:
    horizon: int
    first_instability: int | None
    common_factor: tuple | None
    n_max: int

    @property
    def verdict(self) -> str:
        if self.first_instability is None:
            return f"stable up to horizon {self.horizon}"
        return f"instability witnessed at n={self.first_instability}"

    @property
    def stable(self) -> bool:
        return self.first_instability is None


def stability_check(seq: DegreeSequence) -> StabilityReport:
    if len(seq.entries) < 2:
        raise EmptySequence("stability check needs at least D_0 and D_1")
    first = None
    factor = None
    for n in range(2, len(seq.entries)):
        if seq.factor_removed[n]:
            first = n
            factor = seq.common_factors[n]
            break
    return StabilityReport(seq.stability_horizon, first, factor, seq.n_max)


# -- linear conjugation ------------------------------------------------------------------

def _inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("conjugating matrix is singular")
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                t = A[r][c]
                A[r] = [a - t * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _integral_multiple(M):
    den = 1
    for row in M:
        for x in row:
            q = Fraction(x)
            den = den * q.denominator // _gcd(den, q.denominator)
    return [[int(Fraction(x) * den) for x in row] for row in M]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def conjugate_map(f: RationalMap, L: Sequence) -> RationalMap:
    """reduce(L o f o L^-1) for per-factor invertible rational matrices L.

    Matrices act on homogeneous coordinates; scalar multiples are irrelevant
    projectively, so rational entries are cleared by a common denominator.
    """
    space = f.source
    if f.target != space:
        raise ValidationError("conjugation needs a self-map")
    if len(L) != space.nblocks:
        raise ValidationError(f"need {space.nblocks} matrices, one per factor")
    fwd, inv = [], []
    for M, k in zip(L, space.factors):
        if len(M) != k + 1 or any(len(r) != k + 1 for r in M):
            raise ValidationError(f"matrix for P^{k} must be {k + 1}x{k + 1}")
        fwd.append(_integral_multiple(M))
        inv.append(_integral_multiple(_inverse(M)))
    Lmap = RationalMap.linear(space, fwd)
    Linv = RationalMap.linear(space, inv)
    return reduce_map(compose(Lmap, compose(f, Linv)))


# -- plain-text table -----------------------------------------------------------------

def format_matrix(D) -> str:
    if len(D) == 1:
        return str(D[0][0])
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in D) + "]"


def _format_factors(factors) -> str:
    if not factors or all(p.is_constant() for p in factors):
        return "-"
    return " ; ".join(format_polynomial(p) for p in factors)


def degree_table(seq: DegreeSequence, report: LambdaReport | None = None) -> str:
    """Plain-text degree table: one line per n, then the lambda summary."""
    if report is None:
        report = lambda_estimate(seq)
    row_bounds = {b.n: b for b in report.upper_bounds if b.kind in ("row_sum", "bezout")}
    lines = [f"map: {seq.map}", f"space: {seq.map.source}",
             "n\tdegree\tfactor_removed\tcommon_factor\tupper_bound"]
    for n, D in enumerate(seq.entries):
        ub = f"{row_bounds[n].interval.hi:.6f}" if n in row_bounds else "-"
        removed = "yes" if seq.factor_removed[n] else "no"
        factors = _format_factors(seq.common_factors[n]) if n else "-"
        lines.append(f"{n}\t{format_matrix(D)}\t{removed}\t{factors}\t{ub}")
    best = report.best
    lines.append(f"lambda_{report.codim} <= {best.interval.hi:.6f} "
                 f"({best.flag}, n={best.n}, {best.kind})")
    st = stability_check(seq)
    lines.append(f"stability: {st.verdict}")
    if st.common_factor:
        lines.append(f"common_factor: {_format_factors(st.common_factor)}")
    if seq.truncated:
        lines.append(f"truncated: {seq.truncation_reason}")
    return "\n".join(lines) + "\n"
