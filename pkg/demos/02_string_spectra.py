#!/usr/bin/env python3
"""Hearing the dimension of a random Cantor string.

Samples random strings, counts Dirichlet eigenvalues exactly, and shows
the two leading terms of the counting function: the Weyl term
sqrt(lambda)/pi and the boundary term frakN * lambda^{gamma/2} whose
exponent is the boundary's box-counting dimension gamma.
"""

import math

from cantorspec import WeightSpec, box_counting_dimension, estimate_frak_N
from cantorspec.strings import count_eigenvalues, generate_gaps

spec = WeightSpec((1.0, 1.0), 0.5)

print("one realisation, increasing lambda (exact counts):")
print(f"{'lambda':>10} {'N(lambda)':>10} {'weyl':>12} {'nbar':>9} {'nbar/l^g/2':>11}")
for lam in (1e4, 1e6, 1e8, 1e10):
    gs = generate_gaps(spec, 0.5, math.pi / math.sqrt(lam), 12345)
    n = count_eigenvalues(gs, lam)
    weyl = math.sqrt(lam) / math.pi
    nbar = weyl - n
    print(f"{lam:>10.0e} {n:>10d} {weyl:>12.1f} {nbar:>9.2f} "
          f"{nbar * lam ** -0.25:>11.4f}")

print("\nboundary constant frakN over independent strings (99% CIs):")
for lam in (1e6, 1e8, 1e10):
    mean, half = estimate_frak_N(spec, 0.5, lam, 2000, 777)
    print(f"  lambda = {lam:.0e}: {mean:.4f} +- {half:.4f}")

print("\nbox-counting dimension of the boundary (slope of ln E N(eps) "
      "vs ln 1/eps):")
for alphas, gamma in (((1.0, 1.0), 0.5), ((1.0, 1.0, 1.0), 0.6),
                      ((1.0, 1.0), 0.9)):
    slope, _ = box_counting_dimension(WeightSpec(alphas, gamma), gamma,
                                      [2.0 ** -k for k in range(6, 13)],
                                      master_seed=4242, replicates=300)
    print(f"  alphas={alphas}, gamma={gamma}: slope = {slope:.4f}")
