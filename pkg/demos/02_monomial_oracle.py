"""Monomial maps: exact dynamical degrees versus iterated symbolic degrees.

For an integer matrix A, lambda_p is the spectral radius of the p-th compound
of A. Iterating the induced map on (P^1)^2 recovers A^n as multidegree
matrices, so the n-th root bounds close in on lambda_1.
"""
from dyndeg import (MonomialMap, iterate_degrees, lambda_estimate, monomial_dynamical_degrees,
                    monomial_to_rational_map)

A = [[2, 1], [1, 1]]
m = MonomialMap(A)
lam = monomial_dynamical_degrees(m)
print("lambda_p:", [f"[{iv.lo:.12f}, {iv.hi:.12f}]" for iv in lam])

f = monomial_to_rational_map(m, "p1")
print("induced map:", f)
seq = iterate_degrees(f, 10)
rep = lambda_estimate(seq)
for b in rep.upper_bounds:
    if b.kind == "row_sum":
        print(f"n={b.n:2d}  D_n={[list(r) for r in seq.entries[b.n]]}  bound={b.interval.hi:.6f}")
print("best certified bound:", rep.best.as_dict())

# projective model of the affine map (x, y) -> (x/y, y)
print(monomial_to_rational_map(MonomialMap([[1, -1], [0, 1]]), "projective"))
