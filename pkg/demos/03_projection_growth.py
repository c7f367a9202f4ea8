"""Empirical operator norms for multi-frequency projections as the set grows.

A small budget: expect a few minutes at most. The acceptance suite runs the
same scan with many more trials.
"""

from oscillab.normlab import OperatorSpec, growth_scan

N_list = [2, 4, 8, 16]
for kind in ("jump", "maximal"):
    rep = growth_scan(OperatorSpec(kind, lam=0.25 if kind == "jump" else None, size=1 << 13), N_list,
                      trials=8, seed=0, ascent_steps=8, power_steps=20 if kind == "maximal" else 0)
    ratios = rep.column("ratio")
    s = rep.summary
    print(kind, " ".join(f"N={N}:{r:.3f}" for N, r in zip(N_list, ratios)))
    print(f"   log fit slope {s['log_fit']['c1']:+.4f}, log^2 fit slope {s['log2_fit']['c2']:+.5f}")
