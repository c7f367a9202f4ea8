"""Complete Weyl sums, major arcs and the approximation of m_N."""

import numpy as np

from oscillab.expsums import error_scan, half_bin_grid, major_arcs, multiplier_m, weyl_sum
from oscillab.polynomial import SQRT2, RealPolynomial

print("|S(q; a)| for x^2 against q^(-1/2)")
for q in (3, 5, 7, 11, 101):
    print(f"  q={q:3d}  |S|={abs(weyl_sum(q, [0, 1])):.4f}  q^-1/2={q ** -0.5:.4f}")

Q = RealPolynomial.monomial(SQRT2, 2)
print("\nmajor arcs for sqrt2 n^2 at level s=1 in [0, 1)")
for arc in major_arcs(1, 0, Q, (0, 1)):
    print(f"  theta={arc.theta:.6f}  q={arc.q}  a={arc.a_d}  m={arc.m}  S={arc.weyl_value:.4f}")

beta = half_bin_grid(8)
print("\n|m_N| on a coarse grid, N=4096:", np.round(np.abs(multiplier_m(4096, 0, beta, Q)), 4).tolist())

rep = error_scan([1 << k for k in range(8, 13)], Q, grid_size=1 << 10)
for N, e in zip(rep.column("N"), rep.column("sup_error")):
    print(f"  N={N:5d}  sup |m_N - approx| = {e:.4f}")
print("log-log slope", round(rep.summary["loglog_slope"], 3))
