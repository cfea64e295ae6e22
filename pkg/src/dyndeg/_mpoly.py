"""Sparse multivariate integer polynomials as ``{exponent tuple: int}`` dicts.

Kernel routines behind :mod:`dyndeg.polycore`. Nothing here knows about
variable blocks or homogeneity; all exponent tuples of one polynomial have the
same length and zero coefficients are never stored.
"""
from __future__ import annotations

import random
from functools import reduce
from math import gcd as igcd
from operator import add as _add, sub as _sub

# Mersenne prime for modular images in the coprimality test.
_P = (1 << 61) - 1


class NotExact(ArithmeticError):
    pass


def one(nvars):
    return {(0,) * nvars: 1}


def add(a, b):
    r = dict(a)
    for e, c in b.items():
        v = r.get(e, 0) + c
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def sub(a, b):
    r = dict(a)
    for e, c in b.items():
        v = r.get(e, 0) - c
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def neg(a):
    return {e: -c for e, c in a.items()}


def scale(a, k):
    if not k:
        return {}
    return {e: c * k for e, c in a.items()}


def mul(a, b):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        (e1, c1), = a.items()
        return {tuple(map(_add, e1, e2)): c1 * c2 for e2, c2 in b.items()}
    r = {}
    get = r.get
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(map(_add, e1, e2))
            r[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in r.items() if c}


def power(a, n, nvars=None):
    if n < 0:
        raise ValueError("negative power")
    if n == 0:
        if nvars is None:
            nvars = len(next(iter(a))) if a else 0
        return one(nvars)
    if not a:
        return {}
    if len(a) == 1:
        (e, c), = a.items()
        return {tuple(x * n for x in e): c ** n}
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def icontent(a):
    return reduce(igcd, a.values(), 0)


def monomial_content(a):
    it = iter(a)
    m = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x < m[i]:
                m[i] = x
    return tuple(m)


def shift(a, m, sign=1):
    """Multiply (sign=1) or divide (sign=-1) by the monomial with exponent m."""
    op = _add if sign > 0 else _sub
    return {tuple(map(op, e, m)): c for e, c in a.items()}


def is_constant(a):
    return len(a) <= 1 and all(x == 0 for e in a for x in e)


def variables(a):
    nv = len(next(iter(a))) if a else 0
    return frozenset(i for i in range(nv) if any(e[i] for e in a))


def degree_in(a, v):
    return max((e[v] for e in a), default=0)


def leading_term(a):
    """Lex-largest exponent (canonical leading term for multihomogeneous input)."""
    return max(a)


def normalize(a):
    """Primitive part with positive lex-leading coefficient."""
    if not a:
        return {}
    c = icontent(a)
    if a[max(a)] < 0:
        c = -c
    if c == 1:
        return dict(a)
    return {e: v // c for e, v in a.items()}


def divexact(a, b):
    """Exact quotient a / b; raises NotExact if b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return {}
    if len(b) == 1:
        (eb, cb), = b.items()
        q = {}
        for e, c in a.items():
            d = tuple(map(_sub, e, eb))
            if min(d) < 0:
                raise NotExact("monomial does not divide")
            qc, r = divmod(c, cb)
            if r:
                raise NotExact("coefficient does not divide")
            q[d] = qc
        return q
    lb = max(b)
    cb = b[lb]
    r = dict(a)
    q = {}
    while r:
        lr = max(r)
        d = tuple(map(_sub, lr, lb))
        if min(d) < 0:
            raise NotExact("leading monomial does not divide")
        qc, rem = divmod(r[lr], cb)
        if rem:
            raise NotExact("leading coefficient does not divide")
        q[d] = qc
        for e, c in b.items():
            t = tuple(map(_add, e, d))
            v = r.get(t, 0) - qc * c
            if v:
                r[t] = v
            else:
                r.pop(t, None)
    return q


def divides(b, a):
    try:
        divexact(a, b)
    except NotExact:
        return False
    return True


def derivative(a, v):
    out = {}
    for e, c in a.items():
        k = e[v]
        if k:
            f = list(e)
            f[v] = k - 1
            out[tuple(f)] = c * k
    return out


def evaluate(a, point):
    """Value at a point (any numeric type supporting ** and *)."""
    total = 0
    for e, c in a.items():
        t = c
        for x, k in zip(point, e):
            if k:
                t = t * x ** k
        total = total + t
    return total


def partial_evaluate(a, assignment):
    """Substitute values for some variables; their exponents become zero.

    ``assignment`` maps variable index to an integer value.
    """
    out = {}
    for e, c in a.items():
        f = list(e)
        for v, x in assignment.items():
            k = f[v]
            if k:
                c = c * x ** k
                f[v] = 0
        if c:
            t = tuple(f)
            s = out.get(t, 0) + c
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return out


def substitute(a, images, nvars_out):
    """Replace variable i of ``a`` by the polynomial ``images[i]``."""
    cache = [dict() for _ in images]

    def pw(i, k):
        c = cache[i]
        if k not in c:
            if k == 1:
                c[1] = images[i]
            elif k % 2 == 0:
                h = pw(i, k // 2)
                c[k] = mul(h, h)
            else:
                c[k] = mul(pw(i, k - 1), images[i])
        return c[k]

    out = {}
    base = one(nvars_out)
    for e, c in sorted(a.items()):
        t = scale(base, c)
        for i, k in enumerate(e):
            if k:
                t = mul(t, pw(i, k))
                if not t:
                    break
        for f, d in t.items():
            s = out.get(f, 0) + d
            if s:
                out[f] = s
            else:
                out.pop(f, None)
    return out


# -- gcd ------------------------------------------------------------------

def gcd(a, b):
    """Primitive gcd with positive lex-leading coefficient.

    gcd(0, 0) is 0. Monomial and integer contents are split off first, then a
    modular coprimality test runs before the exact recursive subresultant PRS.
    """
    if not a:
        return normalize(b)
    if not b:
        return normalize(a)
    nv = len(next(iter(a)))
    ma, mb = monomial_content(a), monomial_content(b)
    m = tuple(map(min, ma, mb))
    a1 = normalize(shift(a, ma, -1))
    b1 = normalize(shift(b, mb, -1))
    g = _gcd_primitive(a1, b1, nv)
    return normalize(shift(g, m))


def gcd_many(polys):
    polys = sorted((p for p in polys if p), key=len)
    if not polys:
        return {}
    g = normalize(polys[0])
    for p in polys[1:]:
        if is_constant(g):
            break
        g = gcd(g, p)
    return g


def _gcd_primitive(a, b, nv):
    # a, b: integer-primitive, no monomial factor.
    if is_constant(a) or is_constant(b):
        return one(nv)
    va, vb = variables(a), variables(b)
    only = (va - vb) or (vb - va)
    if only:
        if va - vb:
            src, other = a, b
        else:
            src, other = b, a
        v = min(only)
        g = other
        for c in _univariate(src, v):
            if c:
                g = gcd(g, c)
                if is_constant(g):
                    return one(nv)
        return g
    common = va & vb
    if _coprime_modular(a, b, common):
        return one(nv)
    v = min(common, key=lambda i: (max(degree_in(a, i), degree_in(b, i)), i))
    A, B = _univariate(a, v), _univariate(b, v)
    ca, cb = gcd_many(A), gcd_many(B)
    c = gcd(ca, cb)
    A = [divexact(x, ca) if x else {} for x in A]
    B = [divexact(x, cb) if x else {} for x in B]
    if len(A) < len(B):
        A, B = B, A
    G = _prs_gcd(A, B, nv)
    out = {}
    for k, coeff in enumerate(G):
        for e, x in coeff.items():
            f = list(e)
            f[v] = k
            out[tuple(f)] = x
    return mul(c, out)


def _univariate(a, v):
    """Coefficient list in variable v (index = degree), v-exponent zeroed."""
    d = degree_in(a, v)
    coeffs = [dict() for _ in range(d + 1)]
    for e, c in a.items():
        k = e[v]
        f = list(e)
        f[v] = 0
        coeffs[k][tuple(f)] = c
    return coeffs


def _prem(A, B):
    n = len(B) - 1
    lcB = B[-1]
    R = list(A)
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= n:
        d = len(R) - 1 - n
        lcR = R[-1]
        R = [mul(lcB, r) for r in R]
        for i, bi in enumerate(B):
            R[i + d] = sub(R[i + d], mul(lcR, bi))
        while R and not R[-1]:
            R.pop()
        e -= 1
    if R and e > 0:
        f = power(lcB, e)
        R = [mul(f, r) for r in R]
    return R


def _prs_gcd(A, B, nv):
    """Subresultant PRS; A, B primitive in the main variable, deg A >= deg B."""
    if len(B) == 1:
        return [one(nv)]
    g = h = one(nv)
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return [one(nv)]
        div = mul(g, power(h, delta, nv))
        A, B = B, [divexact(r, div) if r else {} for r in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = divexact(power(g, delta), power(h, delta - 1, nv))
    cont = gcd_many(B)
    return [divexact(x, cont) if x else {} for x in B]


def _coprime_modular(a, b, common):
    """True only if gcd(a, b) is provably constant.

    For each shared variable v, specialise the other variables at a random
    point mod p. If v's leading coefficient of ``a`` survives and the image
    gcd has degree 0, no factor of positive v-degree divides both.
    """
    rng = random.Random(len(a) * 1000003 + len(b))
    for v in sorted(common):
        point = [rng.randrange(2, _P) for _ in range(len(next(iter(a))))]
        ua = _image(a, v, point)
        ub = _image(b, v, point)
        if len(ua) - 1 != degree_in(a, v):
            return False
        if len(_umod_gcd(ua, ub)) > 1:
            return False
    return True


def _image(a, v, point):
    d = degree_in(a, v)
    out = [0] * (d + 1)
    for e, c in a.items():
        t = c % _P
        for j, k in enumerate(e):
            if k and j != v:
                t = t * pow(point[j], k, _P) % _P
        out[e[v]] = (out[e[v]] + t) % _P
    while out and out[-1] == 0:
        out.pop()
    return out


def _umod_gcd(a, b):
    while b:
        a, b = b, _umod_rem(a, b)
    return a


def _umod_rem(a, b):
    a = list(a)
    inv = pow(b[-1], _P - 2, _P)
    while len(a) >= len(b):
        q = a[-1] * inv % _P
        s = len(a) - len(b)
        for i, x in enumerate(b):
            a[s + i] = (a[s + i] - q * x) % _P
        while a and a[-1] == 0:
            a.pop()
    return a
