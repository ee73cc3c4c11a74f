"""
Describing your own fractal
===========================

A fractal is given by its cell count, its boundary count and the glue rules
between first-level cells.  This one cuts an interval into three pieces; the
middle map fixes neither endpoint.
"""
import os
from fractions import Fraction as F

from fracmetric import check_up, parse_spec, validate_spec, vertex_count
from fracmetric.graph import build_level_graph, to_dot

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "three_piece_interval.txt")) as fh:
    spec = parse_spec(fh.read())

print(validate_spec(spec))
print("vertices per level:", [vertex_count(spec, m) for m in range(5)])
print()

# Same story as the two-piece interval: metric exactly when the ratios sum to 1 or more.
for alpha in ((F(1, 3),) * 3, (F(1, 4), F(1, 4), F(1, 3)), (F(1, 5), F(1, 5), F(3, 5)), (F(1, 10), F(4, 5), F(1, 5))):
    cert = check_up(spec, alpha)
    print(f"sum {sum(alpha)!s:>5}: {cert.summary()}")
print()

print(to_dot(build_level_graph(spec, 1), (F(1, 3),) * 3))
