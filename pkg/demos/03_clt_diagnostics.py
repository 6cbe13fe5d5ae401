#!/usr/bin/env python3
"""How the spectral CLT emerges with lambda -- and why fixed-lambda KS
tests stay unhappy.

At any fixed lambda the eigenvalue count is an integer, so the CLT
statistic lives on a lattice of spacing lambda^{-gamma/4}: 0.1 at
lambda = 1e8, i.e. about a third of the statistic's standard deviation.
Moment diagnostics (skewness, excess kurtosis) converge to their normal
values long before a fitted-normal KS/AD test can forgive the lattice;
watch the Anderson-Darling p-value climb as the spacing shrinks.
"""

from cantorspec import WeightSpec, clt_experiment, estimate_frak_N

spec = WeightSpec((1.0, 1.0), 0.5)
pilot, _ = estimate_frak_N(spec, 0.5, 4e8, 4000, 2024)
print(f"pilot centring constant: {pilot:.5f}\n")
print(f"{'lambda':>8} {'lattice':>8} {'skew':>8} {'ex.kurt':>8} "
      f"{'variance':>9} {'KS p':>8} {'AD p':>10}")
for lam in (1e8, 1e10, 1e12, 1e13):
    s = clt_experiment(spec, 0.5, lam, 2000, pilot, 3033)
    print(f"{lam:>8.0e} {lam ** -0.125:>8.3f} {s.skewness:>+8.3f} "
          f"{s.excess_kurtosis:>+8.3f} {s.variance:>9.4f} "
          f"{s.ks_p_value:>8.3g} {s.ad_p_value:>10.3g}")

print("\nno-CLT regime for contrast (alpha = 60, exploratory only: the\n"
      "oscillatory term is far below desk-scale resolution, so the shape\n"
      "diagnostics look just as normal):")
spec60 = WeightSpec((60.0, 60.0), 0.5)
pilot60, _ = estimate_frak_N(spec60, 0.5, 4e8, 4000, 2025)
s = clt_experiment(spec60, 0.5, 1e8, 2000, pilot60, 3034)
print(f"  skew={s.skewness:+.3f} ex.kurt={s.excess_kurtosis:+.3f} "
      f"variance={s.variance:.4f}")
