"""
Which ratios make the gasket metric?
====================================

Sweep alpha_3 with alpha_1 and alpha_2 on a grid, run the checker at every
point and draw the verdicts as a character map.  ``#`` is a proven metric
polyratio, ``.`` a proven non-metric one, ``?`` would mark an undecided
point (none appear).
"""
import time
from fractions import Fraction as F

from fracmetric import builtin, check_up, closed_form_metric, metric_verdict, MetricStatus

gasket = builtin("gasket")
ticks = [F(i, 10) for i in range(1, 10)]
symbol = {MetricStatus.METRIC: "#", MetricStatus.NOT_METRIC: ".", MetricStatus.UNDECIDED: "?"}

start = time.perf_counter()
disagreements = 0
for a3 in (F(3, 10), F(1, 2), F(7, 10)):
    print(f"alpha_3 = {a3}   (rows: alpha_1 from 0.9 down, columns: alpha_2 from 0.1)")
    for a1 in reversed(ticks):
        line = ""
        for a2 in ticks:
            alpha = (a1, a2, a3)
            status = metric_verdict(check_up(gasket, alpha))
            disagreements += (status is MetricStatus.METRIC) != closed_form_metric("gasket", alpha)
            line += symbol[status]
        print("   ", line)
    print()

# every verdict agrees with the pairwise-sum rule, which the checker never consults
print(f"disagreements with the pairwise-sum rule: {disagreements}")
print(f"elapsed: {time.perf_counter() - start:.1f}s")
