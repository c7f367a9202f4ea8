"""Polynomial averages on a rotation: tails along lacunary times, and the
Whitney splitting of the same averages on the integer shift."""

import numpy as np

from oscillab.ergodic import (
    CircleRotation, Indicator, TrigPolynomial, average_series, oscillation_report,
    shift_average, tail_diameters, whitney_components,
)
from oscillab.partitions import whitney
from oscillab.polynomial import GOLDEN, SQRT2, RealPolynomial

P = RealPolynomial.monomial(SQRT2, 2)
rot = CircleRotation(GOLDEN)
x = np.linspace(0, 1, 64, endpoint=False)

for name, f in (("e(x)", TrigPolynomial({1: 1.0})), ("1_[0,1/3)", Indicator(0, 1 / 3))):
    s = average_series(rot, f, x, P, 1, 1 << 14)
    tails = tail_diameters(s, [1 << 8, 1 << 10, 1 << 12])
    print(name, "tail diameters:", [round(v, 4) for v in tails.column("grid_p_norm")])
    print("   V^2.5 grid norm:", round(oscillation_report(s, "variation", 2.5).summary["grid_p_norm"], 4))

f = {0: 1.0, 4: -1.0}
comps, trunc = whitney_components(f, 1 << 10, P, whitney(16))
total = sum(comps.values(), shift_average({}, 1, P))
print("\nWhitney pieces:", len(comps), " reconstruction error:",
      total.max_difference(shift_average(f, 1 << 10, P)), " truncation:", trunc)
