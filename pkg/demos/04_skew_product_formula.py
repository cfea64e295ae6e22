"""A skew product over P^1 and the fibred formula for its dynamical degrees.

f(x, y) = ([x0^2 : x1^2], [x0*y0^2 : x1*y1^2]) covers g = [x0^2 : x1^2]. The
fibre maps have degree 2^n, so lambda_1(f) = max(2, 2) and
lambda_2(f) = 2 * 2.
"""
from dyndeg import (AmbientSpace, MonomialSemiConjugacy, build_semiconjugacy, iterate_degrees,
                    lambda_estimate, parse_map, product_formula_check, product_formula_verify,
                    relative_degree_sequence)

f = parse_map("[x0^2 : x1^2] ; [x0*y0^2 : x1*y1^2]", AmbientSpace.product(1, 1))
sc = build_semiconjugacy(f, 1)
print("base map:", sc.g)

seq = iterate_degrees(f, 8)
l1 = lambda_estimate(seq, codim=1).best
l2 = lambda_estimate(seq, codim=2).best
print("lambda_1(f) <=", l1.interval.hi, l1.flag, "| lambda_2(f) <=", l2.interval.hi, l2.flag)

rel = relative_degree_sequence(sc, 1, 8, seed=1)
print("fibre degrees:", rel.entries, "from base points", rel.fiber_samples)
print("agrees with the fibre block of D_n:", rel.oracle_agrees)

lg = lambda_estimate(iterate_degrees(sc.g, 8)).best_estimate
pf = product_formula_verify([1, l1.interval, l2.interval], [1, lg],
                            [rel.lambda_rel[0], rel.lambda_rel[1]], tol=1e-2)
print("product formula:", pf.verdict, [iv.hi for iv in pf.rhs])

# the same check exactly, for a monomial threefold fibred over a curve
mono = product_formula_check(MonomialSemiConjugacy.block_triangular([[2, 0, 0], [0, 3, 0], [0, 0, 5]], 1))
print("diag(2,3,5):", mono.verdict, [iv.lo for iv in mono.lambda_f], [iv.lo for iv in mono.rhs])
