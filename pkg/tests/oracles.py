"""Independent reference computations used only by the tests."""
import itertools

import numpy as np
import sympy


def to_sympy(terms, gens):
    return sympy.Add(*[c * sympy.Mul(*[g ** e for g, e in zip(gens, exp)])
                       for exp, c in terms.items()]) if terms else sympy.Integer(0)


def from_sympy(expr, gens):
    if expr == 0:
        return {}
    return {tuple(m): int(c) for m, c in sympy.Poly(sympy.expand(expr), *gens).terms()}


def naive_mul(a, b):
    """Schoolbook product, written independently of the library kernel."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def primitive_sympy(expr, gens):
    """Primitive part with positive leading coefficient (grlex order)."""
    if expr == 0:
        return sympy.Integer(0)
    p = sympy.Poly(expr, *gens)
    p = p.primitive()[1]
    if p.LC(order="grlex") < 0:
        p = -p
    return p.as_expr()


def compound_numpy(A, p):
    A = np.array(A, dtype=float)
    k = A.shape[0]
    idx = list(itertools.combinations(range(k), p))
    return np.array([[np.linalg.det(A[np.ix_(r, c)]) for c in idx] for r in idx])


def lambda_numpy(A):
    """lambda_p as products of the p largest eigenvalue moduli."""
    mods = sorted(np.abs(np.linalg.eigvals(np.array(A, dtype=float))), reverse=True)
    return [float(np.prod(mods[:p])) for p in range(len(mods) + 1)]
