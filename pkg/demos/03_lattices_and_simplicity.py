"""Intersection lattices of blown-up planes, the 1-norm, and spectral checks."""
from dyndeg import (blowup_lattice, cremona_action, hodge_signature, lehmer_action, norm_one,
                    simplicity_check)

for m in range(6):
    print(f"blowup at {m} points: signature {hodge_signature(blowup_lattice(m).pairing)}")

lat = blowup_lattice(1)
for v in ([1, -1], [0, 1], [1, 0], [-3, 5]):
    res = norm_one(lat, v)
    fmt = lambda u: "(" + ", ".join(str(x) for x in u) + ")"  # noqa: E731
    print(f"||{v}||_1 = {res.value}  as {fmt(res.v1)} - {fmt(res.v2)}, dual {fmt(res.dual)}")

for name, action in (("Lehmer", lehmer_action()), ("Cremona", cremona_action())):
    rep = simplicity_check(action, 1)
    print(f"{name}: r1 in [{rep.r1.lo!r}, {rep.r1.hi!r}] -> {rep.verdict}")
    print("  char poly:", rep.spectrum.char_poly)
