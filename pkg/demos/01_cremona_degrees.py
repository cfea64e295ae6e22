"""Degree growth of the standard quadratic involution of the plane.

The map squares to the identity, so its degrees alternate 1, 2, 1, 2, ...
Every even iterate loses the common factor x0*x1*x2, which is exactly the
failure of algebraic stability.
"""
from dyndeg import AmbientSpace, degree_table, iterate_degrees, parse_map

sigma = parse_map("[x1*x2 : x0*x2 : x0*x1]", AmbientSpace.projective(2))
seq = iterate_degrees(sigma, 6)
print(degree_table(seq))

# a Henon-type map is algebraically stable: degrees double every step
henon = parse_map("[x1*x2 : x1^2 + 2*x0*x2 : x2^2]", AmbientSpace.projective(2))
print(degree_table(iterate_degrees(henon, 5)))
