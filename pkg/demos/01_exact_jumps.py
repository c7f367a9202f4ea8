"""Why jump counts need dynamic programming.

A greedy left-to-right scan (jump whenever the path moved more than lam
since the last accepted point) can undercount. The exact count optimises
over all index chains.
"""

import numpy as np

from oscillab import jump_count, r_variation


def greedy_jumps(a, lam):
    count, anchor = 0, a[0]
    for v in a[1:]:
        if abs(v - anchor) > lam:
            count += 1
            anchor = v
    return count


a = np.array([0.0, 0.9, -0.2, 1.9])
print("sequence", a.tolist())
print("greedy N_1 =", greedy_jumps(a, 1.0), " exact N_1 =", jump_count(a, 1.0))

rng = np.random.default_rng(3)
gaps = []
for _ in range(2000):
    b = np.cumsum(rng.standard_normal(12))
    gaps.append(jump_count(b, 1.0) - greedy_jumps(b, 1.0))
gaps = np.array(gaps)
print(f"random walks: greedy short in {np.mean(gaps > 0):.1%} of cases, never over: {gaps.min() >= 0}")

# lam N_lam^(1/2) <= V^r for r >= 2
for lam in (0.25, 0.5, 1.0, 2.0):
    print(f"lam={lam:4}  lam*sqrt(N)={lam * np.sqrt(jump_count(b, lam)):.3f}  V^2={r_variation(b, 2):.3f}")
