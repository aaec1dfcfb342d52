"""Distribution of psi mod q over the hyperbolic elements of SL(2, Z_q).

Densities are printed relative to the uniform value 1 / (q - 1); the
bin k = q - 3 is strongly depleted.
"""

from gkptools.clifford import rademacher_stats

for q in (5, 7, 11, 13):
    h = rademacher_stats(q)
    print(f"q = {q}: |SL(2, Z_q)| = {h.group_order}, hyperbolic = {h.total}")
    for k, count, p in h.rows():
        bar = "#" * round(40 * p)
        mark = "  <- q-3" if k == q - 3 else ""
        print(f"  {k:2d} {count:5d} {p * (q - 1):5.2f} {bar}{mark}")
