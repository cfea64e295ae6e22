"""Finite-rank numerical cycle lattices, the l1-type norm and spectral checkers.

A CycleLattice stores a basis of N^p, the pairing matrix against N^{k-p}, the
degree functional and a finite list of effective generators. Pullback actions
act on column vectors: column j of M_p is the image of basis vector j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import _lp
from .errors import (ConeNotPreserved, DimensionMismatch, Infeasible,
                     ValidationError)
from .interval import Interval
from .monomial import SpectralReport, spectral_report


def _frac_matrix(M, name="matrix"):
    try:
        rows = [[Fraction(x) for x in row] for row in M]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} entries must be exact rationals") from exc
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError(f"{name} rows have unequal lengths")
    return rows


def _frac_vector(v):
    return [Fraction(x) for x in v]


def rank(M) -> int:
    A = [list(r) for r in _frac_matrix(M)]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, m):
            if A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


@dataclass
class CycleLattice:
    """N^p with pairing against N^{k-p}, degree functional and effective generators."""

    codim: int
    labels: list
    pairing: list                   # rank x rank' exact rationals
    degree_vector: list             # deg(v) = degree_vector . v
    effective_generators: list = field(default_factory=list)
    polarization: list | None = None

    def __post_init__(self):
        self.pairing = _frac_matrix(self.pairing, "pairing")
        self.degree_vector = _frac_vector(self.degree_vector)
        self.effective_generators = [_frac_vector(g) for g in self.effective_generators]
        n = len(self.labels)
        if len(self.pairing) != n:
            raise DimensionMismatch("pairing must have one row per basis label")
        if len(self.degree_vector) != n:
            raise DimensionMismatch("degree vector length differs from rank")
        for g in self.effective_generators:
            if len(g) != n:
                raise DimensionMismatch("effective generator has wrong length")
        if self.pairing and rank(self.pairing) != min(len(self.pairing), len(self.pairing[0])):
            raise ValidationError("pairing is degenerate")
        for g in self.effective_generators:
            if self.degree(g) <= 0:
                raise ValidationError(f"degree is not positive on generator {g}")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def degree(self, v) -> Fraction:
        v = _frac_vector(v)
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in rank {self.rank} lattice")
        return sum(a * b for a, b in zip(self.degree_vector, v))

    def vector(self, **coeffs) -> list[Fraction]:
        out = [Fraction(0)] * self.rank
        for name, c in coeffs.items():
            out[self.labels.index(name)] = Fraction(c)
        return out


def intersect(lat: CycleLattice, v, w) -> Fraction:
    v, w = _frac_vector(v), _frac_vector(w)
    if len(v) != len(lat.pairing) or (lat.pairing and len(w) != len(lat.pairing[0])):
        raise DimensionMismatch("vector lengths do not match the pairing")
    val = sum(v[i] * lat.pairing[i][j] * w[j]
              for i in range(len(v)) for j in range(len(w)))
    return val


def blowup_lattice(m: int) -> CycleLattice:
    """N^1 of the plane blown up at m general points (m <= 8).

    Basis H, E_1..E_m with pairing diag(1, -1, ..., -1). The polarization is
    H (m = 0), 2H - E_1 (m = 1) or 3H - sum E_i (m >= 2), each ample for
    general points and positive on the listed generators: the (-1)-curves
    E_i, H - E_i - E_j and 2H minus five E_i (and H - E_1, E_1 for m = 1).
    """
    if not 0 <= m <= 8:
        raise ValidationError("supported blowups: 0 <= m <= 8 points")
    labels = ["H"] + [f"E{i + 1}" for i in range(m)]
    n = m + 1
    pairing = [[(1 if i == 0 else -1) if i == j else 0 for j in range(n)] for i in range(n)]

    def vec(h=0, es=(), coef=-1):
        v = [0] * n
        v[0] = h
        for i in es:
            v[i + 1] += coef
        return v

    if m == 0:
        omega = vec(1)
        gens = [vec(1)]
    elif m == 1:
        omega = vec(2, (0,))
        gens = [vec(1, (0,)), vec(0, (0,), coef=1)]
    else:
        omega = vec(3, range(m))
        gens = [vec(0, (i,), coef=1) for i in range(m)]
        gens += [vec(1, (i, j)) for i in range(m) for j in range(i + 1, m)]
        if m >= 5:
            gens += [vec(2, c) for c in combinations(range(m), 5)]
        if m >= 7:
            # cubics through seven points, doubled at one
            for c in combinations(range(m), 7):
                for d in c:
                    v = vec(3, c)
                    v[d + 1] -= 1
                    gens.append(v)
        if m == 8:
            for c in combinations(range(8), 3):
                w = vec(4, range(8))
                for t in c:
                    w[t + 1] -= 1
                gens.append(w)
            for i, j in combinations(range(8), 2):
                w = vec(5, range(8), coef=-2)
                w[i + 1] += 1
                w[j + 1] += 1
                gens.append(w)
            for i in range(8):
                w = vec(6, range(8), coef=-2)
                w[i + 1] -= 1
                gens.append(w)
    degree_vector = [sum(pairing[i][j] * omega[j] for j in range(n)) for i in range(n)]
    return CycleLattice(codim=1, labels=labels, pairing=pairing, degree_vector=degree_vector,
                        effective_generators=gens, polarization=omega)


# -- the norm ------------------------------------------------------------------------

@dataclass
class NormOneResult:
    value: Fraction
    positive: list              # cone coefficients of v1 per generator
    negative: list              # cone coefficients of v2 per generator
    v1: list
    v2: list
    dual: list                  # y with |y.g| <= deg(g) and y.v = value

    def as_dict(self) -> dict:
        return {"value": str(self.value), "flag": "EXACT",
                "v1": [str(x) for x in self.v1], "v2": [str(x) for x in self.v2],
                "dual_certificate": [str(x) for x in self.dual]}


def norm_one(lat: CycleLattice, v) -> NormOneResult:
    """Exact min of deg(v1) + deg(v2) over v = v1 - v2, v1 and v2 in the generated cone."""
    v = _frac_vector(v)
    if len(v) != lat.rank:
        raise DimensionMismatch(f"vector of length {len(v)} in rank {lat.rank} lattice")
    gens = lat.effective_generators
    if not gens:
        raise ValidationError("lattice has no effective generators")
    G = len(gens)
    A = [[g[i] for g in gens] + [-g[i] for g in gens] for i in range(lat.rank)]
    degs = [lat.degree(g) for g in gens]
    res = _lp.solve(A, v, degs + degs)
    if res.status != "optimal":
        raise Infeasible("vector is not a difference of cone elements for the supplied generators")
    pos, neg = res.x[:G], res.x[G:]
    v1 = [sum(c * g[i] for c, g in zip(pos, gens)) for i in range(lat.rank)]
    v2 = [sum(c * g[i] for c, g in zip(neg, gens)) for i in range(lat.rank)]
    y = res.y
    # independent check of the optimality certificate
    for g, d in zip(gens, degs):
        yg = sum(a * b for a, b in zip(y, g))
        assert -d <= yg <= d, "dual certificate infeasible"
    assert sum(a * b for a, b in zip(y, v)) == res.value, "duality gap"
    return NormOneResult(res.value, pos, neg, v1, v2, y)


def in_cone(gens: Sequence, w) -> list | None:
    """Nonnegative coefficients expressing w in the cone of gens, or None."""
    w = _frac_vector(w)
    A = [[Fraction(g[i]) for g in gens] for i in range(len(w))]
    res = _lp.solve(A, w, [0] * len(gens))
    return res.x if res.status == "optimal" else None


# -- inertia ----------------------------------------------------------------------------

def hodge_signature(form) -> tuple[int, int, int]:
    """(positives, negatives, zeros) of a symmetric rational matrix, exactly."""
    A = [list(r) for r in _frac_matrix(form, "form")]
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionMismatch("form must be square")
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        raise ValidationError("form must be symmetric")
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i <- e_i + e_j makes the diagonal entry 2 A_ij != 0
            for t in range(n):
                A[i][t] += A[j][t]
            for t in range(n):
                A[t][i] += A[t][j]
            continue
        d = A[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != piv]
        for i in rest:
            f = A[i][piv] / d
            if f:
                for j in rest:
                    A[i][j] -= f * A[piv][j]
        for i in rest:
            A[i][piv] = A[piv][i] = Fraction(0)
        active = rest
    return pos, neg, n - pos - neg


# -- actions and spectral checkers -----------------------------------------------------------

@dataclass
class PullbackAction:
    """Matrices of f^* on N^p, keyed by codimension p."""

    matrices: dict
    provenance: str = "user-supplied"
    name: str = ""

    def __post_init__(self):
        mats = {}
        for p, M in self.matrices.items():
            M = _frac_matrix(M, f"M_{p}")
            if any(len(r) != len(M) for r in M):
                raise DimensionMismatch(f"M_{p} must be square")
            mats[int(p)] = M
        if 0 in mats and mats[0] != [[Fraction(1)]]:
            raise ValidationError("M_0 must be [1]")
        mats[0] = [[Fraction(1)]]
        self.matrices = dict(sorted(mats.items()))

    def matrix(self, p: int):
        if p not in self.matrices:
            raise ValidationError(f"action has no matrix in codimension {p}")
        return self.matrices[p]


def spectral_data(action: PullbackAction, p: int, eps: float = 1e-12) -> SpectralReport:
    return spectral_report(action.matrix(p), eps)


@dataclass
class SimplicityReport:
    verdict: str                    # PASS, FAIL, HYPOTHESIS_NOT_MET
    r1: Interval
    lambda2: Interval
    simple: bool | None = None
    dominant_real_positive: bool | None = None
    other_max_modulus: Interval | None = None
    detail: str = ""
    spectrum: SpectralReport | None = None


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(Fraction(x))


def simplicity_check(action: PullbackAction, lambda2, tol: float = 1e-9,
                     eps: float = 1e-12) -> SimplicityReport:
    """Check that r_1 is a simple eigenvalue dominating sqrt(lambda_2).

    Applies only when r_1^2 > lambda_2 is certain; every other root modulus must
    then be at most sqrt(lambda_2) + tol.
    """
    lam2 = _as_interval(lambda2)
    rep = spectral_data(action, 1, eps)
    r1 = rep.radius
    r1_sq_lo = Fraction(r1.lo) ** 2
    if not r1_sq_lo > Fraction(lam2.hi):
        return SimplicityReport("HYPOTHESIS_NOT_MET", r1, lam2,
                                detail="r1^2 > lambda2 is not certified", spectrum=rep)
    bound = Fraction(lam2.root(2).hi) + Fraction(tol)
    roots = rep.roots.roots if rep.roots else []
    big = [e for e in roots if e.modulus_hi > bound]
    others = [e for e in roots if e.modulus_hi <= bound]
    other_max = (Interval(max(e.modulus.lo for e in others), max(e.modulus.hi for e in others))
                 if others else Interval(0.0, 0.0))
    count_big = sum(e.multiplicity for e in big)
    simple = count_big == 1
    real_pos = False
    if simple:
        # realness comes from the Sturm count matching the discs on the axis;
        # simplicity from multiplicity one in the squarefree decomposition
        e = big[0]
        real_pos = e.real and e.center[0] - e.radius > 0
    verdict = "PASS" if simple and real_pos else "FAIL"
    detail = (f"{count_big} root(s) above sqrt(lambda2)+tol"
              + ("" if real_pos or not simple else "; dominant root not certified real positive"))
    return SimplicityReport(verdict, r1, lam2, simple, real_pos, other_max, detail, rep)


@dataclass
class ConeCheckReport:
    verdict: str
    r1: Interval
    r2: Interval
    inequality_holds: bool
    simplicity: SimplicityReport | None = None
    coefficients: list = field(default_factory=list)


def cone_preservation_r1r2_check(action: PullbackAction, lat2: CycleLattice,
                                 tol: float = 1e-9, eps: float = 1e-12) -> ConeCheckReport:
    """Verify M_2 preserves the generated cone of N^2, then r_1^2 >= r_2."""
    M2 = action.matrix(2)
    gens = lat2.effective_generators
    if len(M2) != lat2.rank:
        raise DimensionMismatch("M_2 size differs from the N^2 lattice rank")
    coeffs = []
    for g in gens:
        image = [sum(M2[i][j] * g[j] for j in range(len(g))) for i in range(len(M2))]
        c = in_cone(gens, image)
        if c is None:
            raise ConeNotPreserved(f"image of generator {[str(x) for x in g]} leaves the cone")
        coeffs.append(c)
    r1 = spectral_data(action, 1, eps).radius
    r2 = spectral_data(action, 2, eps).radius
    holds = Fraction(r1.hi) ** 2 >= Fraction(r2.lo) - Fraction(tol)
    if not holds:
        return ConeCheckReport("FAIL", r1, r2, False, None, coeffs)
    simp = None
    if Fraction(r1.lo) ** 2 > Fraction(r2.hi):
        simp = simplicity_check(action, r2, tol, eps)
        verdict = simp.verdict
    else:
        verdict = "PASS"
    return ConeCheckReport(verdict, r1, r2, True, simp, coeffs)


# -- preset actions -----------------------------------------------------------------------------

def point_lattice() -> CycleLattice:
    """N^2 of a surface: rank one, generated by the class of a point."""
    return CycleLattice(codim=2, labels=["pt"], pairing=[[1]], degree_vector=[1],
                        effective_generators=[[1]])


def cremona_action() -> PullbackAction:
    """Standard quadratic involution on the plane blown up at its 3 base points.

    H -> 2H - E1 - E2 - E3 and E_i -> H - E_j - E_k.
    """
    cols = [[2, -1, -1, -1], [1, 0, -1, -1], [1, -1, 0, -1], [1, -1, -1, 0]]
    M1 = [[cols[j][i] for j in range(4)] for i in range(4)]
    return PullbackAction({1: M1, 2: [[1]]}, provenance="derived-from-map",
                          name="cremona-involution")


def reflection(alpha: Sequence[int], pairing) -> list[list[Fraction]]:
    """Matrix of v -> v + (v.alpha) alpha, a reflection when alpha.alpha = -2."""
    n = len(alpha)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        dot = sum(e[i] * pairing[i][k] * alpha[k] for i in range(n) for k in range(n))
        cols.append([e[i] + dot * alpha[i] for i in range(n)])
    return [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]


def lehmer_action() -> PullbackAction:
    """Coxeter element of E_10 acting on the 10-point blowup lattice.

    Cyclic shift E1 -> E2 -> ... -> E10 -> E1 composed with the reflection in
    H - E1 - E2 - E3. Its characteristic polynomial is (x - 1) times Lehmer's
    polynomial, so the spectral radius is Lehmer's number.
    """
    n = 11
    pairing = [[(1 if i == 0 else -1) if i == j else 0 for j in range(n)] for i in range(n)]
    alpha = [1, -1, -1, -1] + [0] * 7
    R = reflection(alpha, pairing)
    P = [[Fraction(0)] * n for _ in range(n)]
    P[0][0] = Fraction(1)
    for i in range(10):
        P[1 + (i + 1) % 10][1 + i] = Fraction(1)
    M1 = [[sum(P[i][t] * R[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return PullbackAction({1: M1, 2: [[1]]}, provenance="user-supplied",
                          name="lehmer-coxeter")


def diagonal_action(diag1: Sequence, m2=None) -> PullbackAction:
    M1 = [[Fraction(x) if i == j else Fraction(0) for j, _ in enumerate(diag1)]
          for i, x in enumerate(diag1)]
    mats = {1: M1}
    if m2 is not None:
        mats[2] = m2
    return PullbackAction(mats)
