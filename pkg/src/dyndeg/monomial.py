"""Monomial self-maps u -> u^A and their exact dynamical degrees.

Row i of the integer matrix A lists the exponents of the i-th output
coordinate, so composition corresponds to the matrix product and the
multidegree matrix of the (P^1)^k model of a nonnegative A is A itself.
The p-th dynamical degree is the spectral radius of the p-th compound of A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import _roots
from .errors import DimensionMismatch, NotInvariant, ValidationError
from .interval import Interval
from .polycore import AmbientSpace, Polynomial, RationalMap

Matrix = list


# -- exact integer linear algebra --------------------------------------------

def as_int_matrix(M, name="matrix") -> list[list[int]]:
    try:
        rows = [[int(x) for x in row] for row in M]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a list of integer rows") from exc
    for row in M:
        for x in row:
            if isinstance(x, float) and not float(x).is_integer():
                raise ValidationError(f"{name} has a non-integer entry {x}")
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError(f"{name} rows have unequal lengths")
    return rows


def matmul(A, B):
    if A and B and len(A[0]) != len(B):
        raise DimensionMismatch(f"{len(A)}x{len(A[0])} times {len(B)}x{len(B[0])}")
    cols = len(B[0]) if B else 0
    return [[sum(a * B[t][j] for t, a in enumerate(row)) for j in range(cols)] for row in A]


def matpow(A, n):
    k = len(A)
    R = [[int(i == j) for j in range(k)] for i in range(k)]
    base = A
    while n:
        if n & 1:
            R = matmul(R, base)
        n >>= 1
        if n:
            base = matmul(base, base)
    return R


def identity(k):
    return [[int(i == j) for j in range(k)] for i in range(k)]


def det(M) -> int:
    """Exact determinant (Bareiss fraction-free elimination)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                A[i][j] = (A[i][j] * A[c][c] - A[i][c] * A[c][j]) // prev
            A[i][c] = 0
        prev = A[c][c]
    return sign * A[n - 1][n - 1]


def compound_matrix(A, p: int) -> list[list[int]]:
    """Matrix of p x p minors, rows and columns indexed by subsets in lex order."""
    A = as_int_matrix(A, "A")
    k = len(A)
    if not 0 <= p <= k:
        raise ValidationError(f"p must lie in 0..{k}")
    subsets = list(combinations(range(k), p))
    return [[det([[A[i][j] for j in cols] for i in rows]) for cols in subsets]
            for rows in subsets]


def char_poly_exact(M) -> list[int]:
    """Coefficients of det(xI - M), highest degree first (leading 1)."""
    M = as_int_matrix(M, "M")
    coeffs = _roots.charpoly(M)
    return [int(c) for c in reversed(coeffs)]


def smith_normal_form(M):
    """Return (S, U, V) with U * M * V = S diagonal, U and V unimodular."""
    A = [list(r) for r in as_int_matrix(M)]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):   # row dst -= q * row src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):   # col dst -= q * col src
        for R in (A, V):
            for row in R:
                row[dst] -= q * row[src]

    for t in range(min(m, n)):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                # enforce the divisibility chain
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                U[t] = [a + b for a, b in zip(U[t], U[bad[0]])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def column_hermite(K):
    """Canonical column-style Hermite form of a full-column-rank integer matrix.

    The columns of the result span the same lattice as the columns of K. The
    form is lower echelon with positive pivots and entries left of each pivot
    reduced into [0, pivot).
    """
    B = [list(r) for r in K]
    m = len(B)
    n = len(B[0]) if m else 0
    col = 0
    pivots = []
    for r in range(m):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if B[r][j]]
            if not nz:
                break
            j = min(nz, key=lambda c: abs(B[r][c]))
            for row in B:
                row[col], row[j] = row[j], row[col]
            others = [c for c in range(col + 1, n) if B[r][c]]
            if not others:
                break
            for c in others:
                q = B[r][c] // B[r][col]
                for row in B:
                    row[c] -= q * row[col]
        if B[r][col] == 0:
            continue
        if B[r][col] < 0:
            for row in B:
                row[col] = -row[col]
        pivots.append((r, col))
        col += 1
    for r, c in pivots:
        p = B[r][c]
        for c2 in range(c):
            q = B[r][c2] // p
            if q:
                for row in B:
                    row[c2] -= q * row[c]
    return B


def solve_exact(K, Y):
    """Unique X with K X = Y for full-column-rank K (exact rationals)."""
    m = len(K)
    n = len(K[0])
    aug = [[Fraction(x) for x in K[i]] + [Fraction(x) for x in Y[i]] for i in range(m)]
    ncols = len(Y[0])
    row = 0
    piv_cols = []
    for c in range(n):
        p = next((r for r in range(row, m) if aug[r][c] != 0), None)
        if p is None:
            raise NotInvariant("kernel basis is rank deficient")
        aug[row], aug[p] = aug[p], aug[row]
        pv = aug[row][c]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv_cols.append(c)
        row += 1
    for r in range(row, m):
        if any(aug[r][n + j] != 0 for j in range(ncols)):
            raise NotInvariant("image leaves the kernel lattice")
    return [[aug[i][n + j] for j in range(ncols)] for i in range(n)]


# -- spectral data -------------------------------------------------------------

@dataclass
class SpectralReport:
    """Certified root moduli of a characteristic polynomial."""

    char_poly: list                       # highest degree first
    root_moduli: list                     # Interval, sorted descending
    radius: Interval
    exact_radius: Fraction | None = None
    multiplicities: list = field(default_factory=list)
    real_flags: list = field(default_factory=list)
    precision_bits: int = 0
    roots: _roots.RootReport | None = None

    @property
    def flag(self) -> str:
        return "EXACT" if self.exact_radius is not None else "CERTIFIED_INTERVAL"

    def determinant_consistent(self) -> bool:
        """|constant term| lies in the interval product of all root moduli."""
        prod = Interval(1.0, 1.0)
        for iv in self.root_moduli:
            prod = prod * iv
        return prod.contains(abs(self.char_poly[-1]))


def _spectral_from_poly(poly_low_first, eps):
    rep = _roots.certified_roots(poly_low_first, eps=eps)
    roots = sorted(rep.roots, key=lambda e: (-e.modulus.hi, -e.modulus.lo))
    moduli, mults, reals = [], [], []
    for e in roots:
        for _ in range(e.multiplicity):
            moduli.append(e.modulus)
            mults.append(e.multiplicity)
            reals.append(e.real)
    if moduli:
        radius = Interval(max(i.lo for i in moduli), max(i.hi for i in moduli))
    else:
        radius = Interval(0.0, 0.0)
    exact = None
    top = [e for e in roots if e.modulus.hi >= radius.lo]
    if top and all(e.exact_modulus is not None for e in top) \
            and len({e.exact_modulus for e in top}) == 1:
        exact = top[0].exact_modulus
        radius = Interval.point(exact)
    return rep, moduli, mults, reals, radius, exact


def spectral_report(M, eps: float = 1e-12) -> SpectralReport:
    """Certified moduli of all eigenvalues of an exact (integer or rational) matrix."""
    low = _roots.charpoly([list(r) for r in M])
    # split off the factor x^j so zero eigenvalues are exact
    j = 0
    while j < len(low) - 1 and low[j] == 0:
        j += 1
    stripped = low[j:]
    if len(stripped) > 1:
        rep, moduli, mults, reals, radius, exact = _spectral_from_poly(stripped, eps)
    else:
        rep, moduli, mults, reals, radius, exact = None, [], [], [], Interval(0.0, 0.0), Fraction(0)
    moduli = moduli + [Interval(0.0, 0.0)] * j
    mults = mults + [j] * j
    reals = reals + [True] * j
    if exact is None and not moduli:
        exact = Fraction(0)
    high = list(reversed(low))
    return SpectralReport(char_poly=[int(c) if Fraction(c).denominator == 1 else c for c in high],
                          root_moduli=moduli, radius=radius, exact_radius=exact,
                          multiplicities=mults, real_flags=reals,
                          precision_bits=rep.precision_bits if rep else 0, roots=rep)


def spectral_radius_certified(M, eps: float = 1e-12) -> Interval:
    """Interval of width <= eps containing the largest eigenvalue modulus of M."""
    return spectral_report(M, eps).radius


# -- monomial maps ----------------------------------------------------------------

@dataclass(frozen=True)
class MonomialMap:
    matrix: tuple

    def __init__(self, matrix):
        A = as_int_matrix(matrix, "A")
        if not A or len(A) != len(A[0]):
            raise ValidationError("monomial matrix must be square and nonempty")
        if det(A) == 0:
            raise ValidationError("det A = 0: monomial map is not dominant")
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in A))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]

    @property
    def det(self) -> int:
        return det(self.rows)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.matrix for x in r)


@dataclass
class DegreeValue:
    """A dynamical degree value with its provenance flag."""

    interval: Interval
    exact: Fraction | None = None

    @property
    def flag(self) -> str:
        return "EXACT" if self.exact is not None else "CERTIFIED_INTERVAL"

    def as_dict(self) -> dict:
        d = {"flag": self.flag, "lo": self.interval.lo, "hi": self.interval.hi}
        if self.exact is not None:
            d["exact"] = str(self.exact)
        return d


def _degree_values(A, eps):
    k = len(A)
    out = [DegreeValue(Interval(1.0, 1.0), Fraction(1))]
    for p in range(1, k):
        rep = spectral_report(compound_matrix(A, p), eps)
        out.append(DegreeValue(rep.radius, rep.exact_radius))
    d = abs(det(A))
    out.append(DegreeValue(Interval.point(d), Fraction(d)))
    return out


def monomial_dynamical_degree_values(m: MonomialMap, eps: float = 1e-12) -> list[DegreeValue]:
    return _degree_values(m.rows, eps)


def monomial_dynamical_degrees(m: MonomialMap, eps: float = 1e-12) -> list[Interval]:
    """Intervals for lambda_0..lambda_k; the end points lambda_0 and lambda_k are exact."""
    return [v.interval for v in monomial_dynamical_degree_values(m, eps)]


def monomial_to_rational_map(m: MonomialMap, model: str = "p1") -> RationalMap:
    """Homogenise u -> u^A on P^k (``model="projective"``) or (P^1)^k (``"p1"``)."""
    A = m.rows
    k = m.dim
    if model in ("projective", "pk", "P^k"):
        space = AmbientSpace.projective(k)
        exps = [tuple(A[i]) + (-sum(A[i]),) for i in range(k)] + [(0,) * (k + 1)]
        low = [min(e[j] for e in exps) for j in range(k + 1)]
        comps = [tuple(Polynomial.monomial(space, tuple(x - l for x, l in zip(e, low)))
                       for e in exps)]
        return RationalMap(space, space, comps, reduced=True)
    if model in ("p1", "P1", "(P^1)^k", "product"):
        space = AmbientSpace.product(*([1] * k))
        comps = []
        for i in range(k):
            num = [0] * (2 * k)
            den = [0] * (2 * k)
            for j, a in enumerate(A[i]):
                if a >= 0:
                    num[2 * j] += a
                    den[2 * j + 1] += a
                else:
                    num[2 * j + 1] -= a
                    den[2 * j] -= a
            comps.append((Polynomial.monomial(space, tuple(num)),
                          Polynomial.monomial(space, tuple(den))))
        return RationalMap(space, space, comps, reduced=True)
    raise ValidationError(f"unknown model {model!r}; use 'projective' or 'p1'")


# -- semi-conjugacies ----------------------------------------------------------------

@dataclass
class MonomialSemiConjugacy:
    """pi(u) = u^P semi-conjugates u^A to u^B: P A = B P."""

    A: list
    P: list
    B: list

    def __post_init__(self):
        self.A = as_int_matrix(self.A, "A")
        self.P = as_int_matrix(self.P, "P")
        self.B = as_int_matrix(self.B, "B")
        k, l = len(self.A), len(self.P)
        if any(len(r) != k for r in self.A) or any(len(r) != k for r in self.P):
            raise DimensionMismatch("A must be k x k and P must be l x k")
        if len(self.B) != l or any(len(r) != l for r in self.B):
            raise DimensionMismatch("B must be l x l")
        if not 1 <= l <= k:
            raise DimensionMismatch("need 1 <= l <= k")
        if matmul(self.P, self.A) != matmul(self.B, self.P):
            raise ValidationError("P * A != B * P")
        S, _, _ = smith_normal_form(self.P)
        if sum(1 for i in range(min(len(S), len(S[0]))) if S[i][i]) != l:
            raise ValidationError("P must have full row rank")
        if det(self.A) == 0:
            raise ValidationError("det A = 0: not dominant")

    @classmethod
    def block_triangular(cls, A, base_dim: int) -> "MonomialSemiConjugacy":
        """Projection onto the first ``base_dim`` coordinates of a block lower-triangular A."""
        A = as_int_matrix(A, "A")
        k = len(A)
        P = [[int(i == j) for j in range(k)] for i in range(base_dim)]
        B = [row[:base_dim] for row in A[:base_dim]]
        return cls(A, P, B)

    @property
    def total_dim(self) -> int:
        return len(self.A)

    @property
    def base_dim(self) -> int:
        return len(self.P)

    @property
    def fiber_dim(self) -> int:
        return self.total_dim - self.base_dim


@dataclass
class KernelRestriction:
    basis: list        # k x (k - l), columns span the saturated kernel
    matrix: list       # (k - l) x (k - l) integer matrix of A on that basis


def kernel_restriction(sc: MonomialSemiConjugacy) -> KernelRestriction:
    """A restricted to the saturated lattice ker P, in a canonical Hermite basis."""
    k, l = sc.total_dim, sc.base_dim
    if l == k:
        return KernelRestriction(basis=[[] for _ in range(k)], matrix=[])
    _, _, V = smith_normal_form(sc.P)
    K = [row[l:] for row in V]
    K = column_hermite(K)
    AK = matmul(sc.A, K)
    X = solve_exact(K, AK)
    if any(x.denominator != 1 for row in X for x in row):
        raise NotInvariant("restriction of A to ker P is not integral")
    return KernelRestriction(basis=K, matrix=[[int(x) for x in row] for row in X])


def monomial_relative_degree_values(sc: MonomialSemiConjugacy, eps=1e-12) -> list[DegreeValue]:
    kr = kernel_restriction(sc)
    if not kr.matrix:
        return [DegreeValue(Interval(1.0, 1.0), Fraction(1))]
    return _degree_values(kr.matrix, eps)


def monomial_relative_degrees(sc: MonomialSemiConjugacy, eps=1e-12) -> list[Interval]:
    """lambda_p(f|pi) for p = 0..k-l."""
    return [v.interval for v in monomial_relative_degree_values(sc, eps)]


@dataclass
class ProductFormulaReport:
    lambda_f: list          # Interval per p = 0..k
    lambda_g: list          # p = 0..l
    lambda_rel: list        # p = 0..k-l
    rhs: list               # Interval per p: max_j lambda_j(g) lambda_{p-j}(rel)
    residuals: list         # interval distance per p
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def product_formula_rhs(lambda_g: Sequence[Interval], lambda_rel: Sequence[Interval], p: int) -> Interval:
    l = len(lambda_g) - 1
    m = len(lambda_rel) - 1
    terms = [lambda_g[j] * lambda_rel[p - j]
             for j in range(0, l + 1) if 0 <= p - j <= m]
    return Interval(max(t.lo for t in terms), max(t.hi for t in terms))


def compare_product_formula(lambda_f, lambda_g, lambda_rel, tol: float = 0.0) -> ProductFormulaReport:
    rhs, res = [], []
    for p in range(len(lambda_f)):
        r = product_formula_rhs(lambda_g, lambda_rel, p)
        rhs.append(r)
        res.append(lambda_f[p].distance(r))
    return ProductFormulaReport(list(lambda_f), list(lambda_g), list(lambda_rel), rhs, res,
                                passed=all(d <= tol for d in res))


def product_formula_check(sc: MonomialSemiConjugacy, eps: float = 1e-12) -> ProductFormulaReport:
    lf = monomial_dynamical_degrees(MonomialMap(sc.A), eps)
    lg = monomial_dynamical_degrees(MonomialMap(sc.B), eps)
    lr = monomial_relative_degrees(sc, eps)
    return compare_product_formula(lf, lg, lr)
