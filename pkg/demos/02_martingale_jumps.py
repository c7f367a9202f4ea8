"""Jump and variation norms of dyadic martingales stay bounded in the depth."""

import numpy as np

from oscillab.martingale import (
    grid_norm, lepingle_jump_ratios, lepingle_variation_ratio, martingale_paths, random_dyadic_function,
)
from oscillab.oscillation import batch_r_variation

lams = 2.0 ** np.arange(-4, 2)
rng = np.random.default_rng(0)
print("depth  sup_lam jump ratio   V^2.5 ratio   V^2 ratio")
for depth in (6, 8, 10, 12, 14):
    fs = [random_dyadic_function(depth, rng) for _ in range(40)]
    jump = max(lepingle_jump_ratios(f, lams).max() for f in fs)
    v25 = max(lepingle_variation_ratio(f, 2.5) for f in fs)
    # r = 2 has no uniform bound in general; random inputs do not find the bad cases
    v2 = max(grid_norm(batch_r_variation(martingale_paths(f), 2.0)) for f in fs)
    print(f"{depth:5d}  {jump:18.3f}   {v25:11.3f}   {v2:9.3f}")
