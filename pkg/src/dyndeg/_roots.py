"""Univariate exact polynomials and certified root enclosures.

Polynomials are coefficient lists, lowest degree first, with int or Fraction
entries and no trailing zeros. Root enclosures use approximate roots from
mpmath that are then verified exactly: for a squarefree p with approximations
z_1..z_n, the Weierstrass corrections W_i = p(z_i) / (a_n prod_{j!=i}(z_i - z_j))
make p / a_n the characteristic polynomial of diag(z) - W 1^T. Gerschgorin
then places every root in a disc centred at z_i - W_i with radius
(n - 1)|W_i|, and an isolated disc holds exactly one root. All of that runs in
exact rational complex arithmetic, so the discs are rigorous.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

import mpmath

from .errors import NonConvergence
from .interval import Interval

Poly = list


# -- exact univariate arithmetic ------------------------------------------------

def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(p) - 1


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def pscale(a, c):
    return trim([x * c for x in a])


def pdivmod(a, b):
    """Quotient and remainder over Q."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in trim(a)]
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(r) >= len(b) and r:
        c = r[-1] / lb
        s = len(r) - len(b)
        q[s] = c
        for i, x in enumerate(b):
            r[s + i] -= c * x
        r = trim(r)
    return trim(q), r


def pderiv(a):
    return trim([i * a[i] for i in range(1, len(a))])


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def primitive(a):
    """Integer primitive form with positive leading coefficient."""
    a = trim(a)
    if not a:
        return []
    den = 1
    for c in a:
        if isinstance(c, Fraction):
            den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in a]
    g = 0
    for c in ints:
        g = _gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def pgcd(a, b):
    """Primitive integer gcd over Q[x]."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, primitive(pdivmod(a, b)[1])
    return primitive(a)


def squarefree_decomposition(p) -> list[tuple[list, int]]:
    """Yun's algorithm: [(factor, multiplicity)], factors primitive, nonconstant."""
    p = primitive(p)
    if len(p) <= 1:
        return []
    out = []
    a = pgcd(p, pderiv(p))
    b = pdivmod(p, a)[0]
    c = pdivmod(pderiv(p), a)[0]
    d = psub(c, pderiv(b))
    i = 1
    while len(b) > 1:
        a = pgcd(b, d)
        if len(a) > 1:
            out.append((primitive(a), i))
        b = pdivmod(b, a)[0]
        c = pdivmod(d, a)[0]
        d = psub(c, pderiv(b))
        i += 1
    return out


def sturm_real_root_count(p) -> int:
    """Number of distinct real roots of p."""
    p = primitive(p)
    if len(p) <= 1:
        return 0
    seq = [p, pderiv(p)]
    while True:
        r = pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-x for x in r])

    def variations(signs):
        signs = [s for s in signs if s]
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    def sgn(x):
        return (x > 0) - (x < 0)
    at_pos = [sgn(q[-1]) for q in seq]
    at_neg = [sgn(q[-1]) * (-1 if degree(q) % 2 else 1) for q in seq]
    return variations(at_neg) - variations(at_pos)


def sign_changes_on(p, lo: Fraction, hi: Fraction) -> bool:
    return peval(p, lo) * peval(p, hi) < 0


def charpoly(M: Sequence[Sequence]) -> list:
    """det(xI - M), lowest degree first (Faddeev-LeVerrier, exact)."""
    n = len(M)
    if n == 0:
        return [1]
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk = A * M_{k-1} + c_{n-k+1} I
        prod = [[sum(A[i][t] * Mk[t][j] for t in range(n) if Mk[t][j]) for j in range(n)]
                for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[n - k + 1]
        Mk = prod
        tr = sum(sum(A[i][t] * Mk[t][i] for t in range(n)) for i in range(n))
        coeffs[n - k] = -tr / k
    return [int(c) if c.denominator == 1 else c for c in coeffs]


# -- exact complex rationals ----------------------------------------------------

def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a, b):
    d = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / d, (a[1] * b[0] - a[0] * b[1]) / d)


def _cabs2(a):
    return a[0] * a[0] + a[1] * a[1]


def _ceval(p, z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def sqrt_down(q: Fraction, bits: int = 80) -> Fraction:
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    return Fraction(isqrt(q.numerator * scale // q.denominator), 1 << bits)


def sqrt_up(q: Fraction, bits: int = 80) -> Fraction:
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    num = -(-q.numerator * scale // q.denominator)
    r = isqrt(num)
    if r * r < num:
        r += 1
    return Fraction(r, 1 << bits)


def _to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if not man:
        return Fraction(0)
    q = Fraction(int(man)) * (Fraction(2) ** exp)
    return -q if sign else q


# -- certified roots -------------------------------------------------------------

@dataclass
class RootEnclosure:
    """A disc known to contain exactly one root (counted once per multiplicity)."""

    center: tuple            # (re, im) as Fractions
    radius: Fraction
    multiplicity: int
    factor_index: int
    modulus: Interval
    real: bool = False
    exact_modulus: Fraction | None = None
    approx: complex = 0j

    @property
    def modulus_lo(self) -> Fraction:
        if self.exact_modulus is not None:
            return self.exact_modulus
        return max(sqrt_down(_cabs2(self.center)) - self.radius, Fraction(0))

    @property
    def modulus_hi(self) -> Fraction:
        if self.exact_modulus is not None:
            return self.exact_modulus
        return sqrt_up(_cabs2(self.center)) + self.radius

    def contains_modulus(self, r: Fraction) -> bool:
        return self.modulus_lo <= r <= self.modulus_hi


@dataclass
class RootReport:
    poly: list
    factors: list = field(default_factory=list)     # [(factor, multiplicity)]
    roots: list = field(default_factory=list)       # list[RootEnclosure]
    precision_bits: int = 0


def _discs(p, prec):
    """Gerschgorin discs for squarefree integer p at working precision prec."""
    n = degree(p)
    if n == 1:
        z = Fraction(-p[0], p[1])
        return [((z, Fraction(0)), Fraction(0), complex(float(z)))]
    with mpmath.workprec(prec):
        approx = mpmath.polyroots([mpmath.mpf(c) for c in reversed(p)],
                                  maxsteps=max(100, 4 * n + prec // 4), extraprec=prec,
                                  error=False)
        zs = [(_to_fraction(z.real), _to_fraction(z.imag)) if isinstance(z, mpmath.mpc)
              else (_to_fraction(z), Fraction(0)) for z in approx]
    if len(set(zs)) < n:
        return None
    lead = Fraction(p[-1])
    out = []
    for i, zi in enumerate(zs):
        den = (lead, Fraction(0))
        for j, zj in enumerate(zs):
            if j != i:
                den = _cmul(den, (zi[0] - zj[0], zi[1] - zj[1]))
        W = _cdiv(_ceval(p, zi), den)
        center = (zi[0] - W[0], zi[1] - W[1])
        radius = (n - 1) * sqrt_up(_cabs2(W), bits=prec + 16)
        out.append((center, radius, complex(approx[i])))
    return out


def _isolated(discs):
    for i, (ci, ri, _) in enumerate(discs):
        for j in range(i + 1, len(discs)):
            cj, rj, _ = discs[j]
            d2 = (ci[0] - cj[0]) ** 2 + (ci[1] - cj[1]) ** 2
            if d2 <= (ri + rj) ** 2:
                return False
    return True


def _simplest_in(lo: Fraction, hi: Fraction, max_den: int = 64):
    """Smallest-denominator rational in [lo, hi] with denominator <= max_den."""
    for q in range(1, max_den + 1):
        k = -((-lo.numerator * q) // lo.denominator)   # ceil(lo * q)
        if Fraction(k, q) <= hi:
            return Fraction(k, q)
    return None


def on_circle_count(p, r: Fraction) -> int:
    """Exact number of distinct roots of squarefree p with |z| = r (r > 0).

    Uses the Cayley parametrisation z = r(1 + it)/(1 - it): real roots t of
    (1 - it)^n p(z) are the circle roots other than z = -r.
    """
    n = degree(p)
    re_part = [Fraction(0)] * (n + 1)
    im_part = [Fraction(0)] * (n + 1)
    plus = [(Fraction(1), Fraction(0))]   # (1 + it)^k
    minus_pows = [[(Fraction(1), Fraction(0))]]
    for _ in range(n):
        minus_pows.append(_cpoly_mul(minus_pows[-1], [(Fraction(1), Fraction(0)),
                                                       (Fraction(0), Fraction(-1))]))
    rk = Fraction(1)
    for k in range(n + 1):
        term = _cpoly_mul(plus, minus_pows[n - k])
        c = p[k] * rk
        if c:
            for d, (a, b) in enumerate(term):
                re_part[d] += c * a
                im_part[d] += c * b
        plus = _cpoly_mul(plus, [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
        rk *= r
    re_part, im_part = trim(re_part), trim(im_part)
    if not re_part and not im_part:
        return n
    g = pgcd(re_part, im_part) if re_part and im_part else primitive(re_part or im_part)
    count = sturm_real_root_count(g) if len(g) > 1 else 0
    if peval(p, -r) == 0:
        count += 1
    return count


def _cpoly_mul(a, b):
    out = [(Fraction(0), Fraction(0))] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            m = _cmul(x, y)
            out[i + j] = (out[i + j][0] + m[0], out[i + j][1] + m[1])
    return out


def certified_roots(p, eps: float = 1e-12, max_prec: int = 8192,
                    snap: bool = True) -> RootReport:
    """Certified root enclosures for an integer/rational polynomial.

    Every root (with multiplicity from the squarefree decomposition) gets a
    disc isolating it within its squarefree factor, with modulus interval no
    wider than ``eps`` unless the modulus snapped to an exact rational.
    Raises NonConvergence if ``max_prec`` bits do not suffice.
    """
    p = primitive(p)
    report = RootReport(poly=p)
    report.factors = squarefree_decomposition(p)
    eps_q = Fraction(eps)
    prec = 64
    for fi, (f, mult) in enumerate(report.factors):
        while True:
            discs = _discs(f, prec) if prec <= max_prec else None
            if prec > max_prec:
                raise NonConvergence(
                    f"could not isolate roots of a degree {degree(f)} factor "
                    f"within {max_prec} bits")
            if discs is not None and _isolated(discs) and \
                    all(2 * r <= eps_q / 2 for _, r, _ in discs):
                break
            prec *= 2
        report.precision_bits = max(report.precision_bits, prec)
        encl = []
        for center, radius, approx in discs:
            encl.append(RootEnclosure(center=center, radius=radius, multiplicity=mult,
                                      factor_index=fi, modulus=Interval(0.0, 0.0),
                                      approx=approx))
        _mark_real(f, encl)
        if snap:
            _snap_moduli(f, encl)
        for e in encl:
            e.modulus = Interval.enclose(e.modulus_lo, e.modulus_hi)
        report.roots.extend(encl)
    return report


def _mark_real(f, encl):
    meets_axis = [e for e in encl if abs(e.center[1]) <= e.radius]
    if len(meets_axis) == sturm_real_root_count(f):
        for e in meets_axis:
            e.real = True


def _snap_moduli(f, encl):
    tried = set()
    for e in encl:
        lo, hi = e.modulus_lo, e.modulus_hi
        r = _simplest_in(lo, hi)
        if r is None or r <= 0 or r in tried:
            continue
        tried.add(r)
        holders = [x for x in encl if x.exact_modulus is None and x.contains_modulus(r)]
        if on_circle_count(f, r) == len(holders):
            for x in holders:
                x.exact_modulus = r


def real_root_interval(e: RootEnclosure) -> tuple[Fraction, Fraction]:
    """Rational bracket for a certified real root."""
    return e.center[0] - e.radius, e.center[0] + e.radius


def spectral_radius(report: RootReport) -> Interval:
    if not report.roots:
        return Interval(0.0, 0.0)
    return Interval(max(e.modulus.lo for e in report.roots),
                    max(e.modulus.hi for e in report.roots))
