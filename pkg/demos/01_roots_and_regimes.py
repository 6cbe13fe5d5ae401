#!/usr/bin/env python3
"""Where does the central limit theorem stop holding?

Walks the symmetric family alpha = (a, a): computes the roots of
psi(theta) = 1, tracks eta(a) = max Re(root), and finds the first weight
for which eta crosses 1/2 (the CLT/no-CLT boundary).  Also prints the
asymmetric thresholds for alpha_2 = 1..4 and dumps a phase grid around
the leading root pair for plotting.
"""

import numpy as np

from cantorspec import WeightSpec, Regime, phase_grid, spectral_roots

print("symmetric sweep: eta(a) and regime")
print(f"{'a':>4} {'eta':>12} {'leading root':>28} {'regime':>9}")
prev = None
threshold = None
for a in range(1, 81):
    sp = spectral_roots(WeightSpec((float(a), float(a)), 0.5))
    lead = (max((r for r, _ in sp.theta_roots), key=lambda r: r.real)
            if sp.theta_roots else None)
    if a <= 10 or a % 10 == 0 or (prev is Regime.CLT and sp.regime is Regime.NO_CLT):
        lead_str = f"{lead.real:+.6f}{abs(lead.imag):+.4f}i" if lead else "none"
        print(f"{a:>4} {sp.eta:>12.6f} {lead_str:>28} {sp.regime.value:>9}")
    if prev is Regime.CLT and sp.regime is Regime.NO_CLT:
        threshold = a
    prev = sp.regime
print(f"\nfirst symmetric weight without a CLT: a = {threshold}")

print("\nasymmetric thresholds (smallest a1 with no CLT, a2 fixed):")
for a2 in range(1, 5):
    for a1 in range(a2 + 1, 60):
        if spectral_roots(WeightSpec((float(a1), float(a2)), 0.5)).regime is Regime.NO_CLT:
            print(f"  a2={a2}: a1={a1}  (so the CLT holds up to a1={a1-1})")
            break

grid = phase_grid(WeightSpec((60.0, 60.0), 0.5), re_range=(0.0, 2.0),
                  im_range=(8.0, 10.0), resolution=64)
np.savetxt("phase_grid_alpha60.csv", grid, delimiter=",",
           header="w_re,w_im,arg,abs", comments="")
zero = grid[np.argmin(grid[:, 3])]
print(f"\nphase grid written to phase_grid_alpha60.csv; "
      f"min |1-f| = {zero[3]:.4f} at w = {zero[0]:.4f}+{zero[1]:.4f}i "
      "(compare the leading root above via w = 1 - theta)")
