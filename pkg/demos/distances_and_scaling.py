"""
Finite-level distances and cell scaling
=======================================

Path distances on the level-m graphs, chain distances over copies, and how
cell diameters compare with alpha_w times the whole diameter.
"""
from fractions import Fraction as F

from fracmetric import builtin, chain_distance, compare_path_chain, path_distance, scaling_report

interval = builtin("interval")

# On the interval the distance between the endpoints follows min(1, a1 + a2)^m.
for alpha in ((F(3, 10), F(3, 10)), (F(1, 2), F(1, 2)), (F(7, 10), F(1, 2))):
    row = [str(path_distance(interval, alpha, m, "e.1", "e.2")) for m in range(5)]
    print(f"alpha={tuple(map(str, alpha))}: ", ", ".join(row))
print()

# Chains of copies can only be cheaper than paths of edges.
gasket = builtin("gasket")
alpha = (F(3, 5), F(1, 2), F(2, 3))
for a, b in (("e.1", "e.2"), ("e.1", "2.3"), ("12.3", "31.2")):
    p = path_distance(gasket, alpha, 3, a, b)
    c = chain_distance(gasket, alpha, 3, a, b)
    print(f"{a:>5} -> {b:<5}  path {p!s:>8}  chain {c!s:>8}")
rep = compare_path_chain(gasket, alpha, 2)
print(f"all {rep.pairs} pairs at level 2: chain <= path is {rep.ok}, largest path/chain ratio {rep.max_ratio}")
print()

# A metric polyratio on the Vicsek set: every cell diameter is exactly alpha_w
# times the total.
vicsek = builtin("vicsek")
print(scaling_report(vicsek, (F(3, 10),) * 4 + (F(2, 5),), 3, 1).to_text())
print()

# A non-metric one on the interval: the whole diameter at level m is (3/5)^m
# while a half is (3/10)(3/5)^(m-1), so each cell looks 5/3 times too big.
for m in (2, 4, 6):
    rep = scaling_report(interval, (F(3, 10), F(3, 10)), m, 1)
    print(f"interval, level {m}: max ratio {rep.max_ratio}")
