"""Acceptance gate: every numbered criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.  Two criteria encode expectations that the underlying
mathematics contradicts; they are implemented exactly as stated, print a
full audit of the computed quantities, and are allowed to stay red:

  * criterion 6: the asymmetric-threshold table actually lists the largest
    alpha_1 in the CLT regime, so the smallest NoCLT alpha_1 is each table
    value + 1 (verified at 40-digit precision; eta at the boundaries is
    separated from 1/2 by >= 1.4e-3, far beyond numerical doubt);
  * criterion 11 (KS clause): at fixed lambda the eigenvalue count is an
    integer, so the CLT statistic lives on a lattice of spacing
    lambda^{-gamma/4} = 0.1 at lambda = 1e8 (~0.35 of its standard
    deviation).  A fitted-normal KS test at M = 2000 resolves deviations
    ~0.023 and therefore rejects any lattice distribution regardless of
    the underlying CLT; the skewness/kurtosis/variance clauses all pass.
"""

import filecmp
import json
import math

import numpy as np
from cantorspec.cli import run as cli_run
from cantorspec.crt import crt_weight_spec, entropy_moment, psi_crt
from cantorspec.gbp import (WeightSpec, grow_cut_set, h_measure_sample,
                            martingale_value, replicate_rng)
from cantorspec.renewal import (Regime, classify_regime, moments, psi,
                                renewal_tail, residue_at_origin, spectral_roots)
from cantorspec.rconst import compute_R
from cantorspec.strings import (GapString, box_counting_dimension,
                                clt_experiment, count_eigenvalues,
                                count_eigenvalues_bruteforce, estimate_frak_N)

Z99 = 2.5758293035489004


def _report(num, name, ok, detail=""):
    line = f"[ACCEPT {num:02d}] {'PASS' if ok else 'FAIL'} {name}"
    if detail:
        line += f" :: {detail}"
    print(line, flush=True)
    assert ok, line


def top_root(spec):
    sp = spectral_roots(spec)
    return max((r for r, _ in sp.theta_roots), key=lambda r: r.real), sp


# --- 1 -----------------------------------------------------------------------

def test_criterion_01_psi_identity():
    rng = np.random.default_rng(10001)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 7))
        spec = WeightSpec(tuple(rng.uniform(0.2, 80.0, size=n)), 0.5)
        worst = max(worst, abs(psi(spec, 1.0) - 1.0))
    monotone = True
    for _ in range(20):
        n = int(rng.integers(2, 7))
        spec = WeightSpec(tuple(rng.uniform(0.2, 80.0, size=n)), 0.5)
        vals = [psi(spec, float(x)) for x in np.linspace(0.0, 3.0, 31)]
        monotone &= all(b < a for a, b in zip(vals, vals[1:]))
    _report(1, "psi(1)=1 and monotonicity", worst <= 1e-12 and monotone,
            f"max |psi(1)-1| = {worst:.2e}, decreasing on [0,3]: {monotone}")


# --- 2 -----------------------------------------------------------------------

def _closed_form_roots(k, alpha):
    if k == 1:
        return []
    if k == 2:
        return [complex(-2.0 * (alpha + 1.0), 0.0)]
    if k == 3:
        disc = 3.0 * alpha * alpha + 12.0 * alpha + 8.0
        return [complex(-(3.0 * alpha + 4.0) / 2.0, s * math.sqrt(disc) / 2.0)
                for s in (+1, -1)]
    if k == 4:
        disc = 4.0 * alpha * alpha + 20.0 * alpha + 15.0
        return ([complex(-2.0 * alpha - 4.0, 0.0)]
                + [complex(-1.5 - alpha, s * math.sqrt(disc) / 2.0)
                   for s in (+1, -1)])
    raise ValueError(k)


def test_criterion_02_closed_form_roots():
    worst = 0.0
    for n in (2, 3, 4):
        for k in (1, 2, 3, 4):
            alpha = k / (n - 1.0)
            spec = WeightSpec((alpha,) * n, 0.5)
            sp = spectral_roots(spec)
            got = sorted((r for r, _ in sp.theta_roots),
                         key=lambda z: (round(z.real, 9), z.imag))
            want = sorted(_closed_form_roots(k, alpha),
                          key=lambda z: (round(z.real, 9), z.imag))
            if len(got) != len(want):
                _report(2, "closed-form roots", False,
                        f"n={n} k={k}: {len(got)} roots, expected {len(want)}")
            for g, w in zip(got, want):
                worst = max(worst, abs(g - w))
    _report(2, "closed-form roots k=1..4, n=2..4", worst <= 1e-10,
            f"max |root - closed form| = {worst:.2e}")


# --- 3, 4 --------------------------------------------------------------------

SEC52_W = {30: complex(0.9951, 9.1074), 60: complex(0.4962, 9.1027),
           80: complex(0.3718, 9.0963)}

APPENDIX = {
    59: (0.495347, 9.10306), 60: (0.503788, 9.1027), 61: (0.511952, 9.10235),
    62: (0.519852, 9.10199), 63: (0.527501, 9.10164), 64: (0.534909, 9.1013),
    65: (0.54209, 9.10096), 66: (0.549052, 9.10062), 67: (0.555805, 9.10028),
    68: (0.56236, 9.09995), 69: (0.568724, 9.09963), 70: (0.574906, 9.09931),
    71: (0.580913, 9.09899), 72: (0.586753, 9.09867), 73: (0.592432, 9.09836),
    74: (0.597958, 9.09806), 75: (0.603335, 9.09776), 76: (0.608571, 9.09746),
    77: (0.613671, 9.09717), 78: (0.618639, 9.09688), 79: (0.623482, 9.09659),
    80: (0.628203, 9.09631),
}


def test_criterion_03_section52_w_roots():
    worst = 0.0
    for alpha, target in SEC52_W.items():
        root, _ = top_root(WeightSpec((float(alpha),) * 2, 0.5))
        w = 1.0 - complex(root.real, -abs(root.imag))  # w = 1 - theta, +Im side
        worst = max(worst, abs(w.real - target.real), abs(w.imag - target.imag))
    _report(3, "sec. 5.2 w-roots at alpha=30/60/80 (4 dp)", worst <= 1e-4,
            f"max component deviation = {worst:.2e}")


def test_criterion_04_appendix_table():
    worst_re = worst_im = 0.0
    for alpha, (re, im) in APPENDIX.items():
        root, _ = top_root(WeightSpec((float(alpha),) * 2, 0.5))
        worst_re = max(worst_re, abs(root.real - re))
        worst_im = max(worst_im, abs(abs(root.imag) - im))
    ok = worst_re <= 1e-5 and worst_im <= 1e-4
    _report(4, "appendix rho table, 22 rows", ok,
            f"max |dRe| = {worst_re:.2e} (<=1e-5), max |dIm| = {worst_im:.2e} (<=1e-4)")


# --- 5 -----------------------------------------------------------------------

def test_criterion_05_clt_threshold():
    verdicts = {}
    for gamma in (0.3, 0.5, 0.7):
        for alpha in range(1, 81):
            verdicts.setdefault(alpha, []).append(
                classify_regime(WeightSpec((float(alpha),) * 2, gamma)))
    invariant = all(len(set(v)) == 1 for v in verdicts.values())
    clt_max = max(a for a, v in verdicts.items() if v[0] is Regime.CLT)
    ok = invariant and clt_max == 59
    _report(5, "CLT threshold alpha=59 and gamma-invariance", ok,
            f"max CLT alpha = {clt_max}, gamma-invariant: {invariant}")


# --- 6 -----------------------------------------------------------------------

SPEC_ASYM_TABLE = {1: 26, 2: 32, 3: 39, 4: 45, 5: 51, 6: 57, 7: 64}


def test_criterion_06_asymmetric_thresholds():
    computed = {}
    etas = {}
    for a2 in range(1, 8):
        for a1 in range(a2 + 1, 71):
            spec = WeightSpec((float(a1), float(a2)), 0.5)
            sp = spectral_roots(spec)
            etas[(a1, a2)] = sp.eta
            if sp.regime is Regime.NO_CLT:
                computed[a2] = a1
                break
    mismatches = {a2: (SPEC_ASYM_TABLE[a2], computed.get(a2))
                  for a2 in SPEC_ASYM_TABLE if computed.get(a2) != SPEC_ASYM_TABLE[a2]}
    if mismatches:
        print("[ACCEPT 06] audit: smallest alpha1 with NoCLT per alpha2 "
              "(computed vs stated):")
        for a2, (stated, got) in sorted(mismatches.items()):
            print(f"    alpha2={a2}: stated {stated} (eta={etas[(stated, a2)]:.6f})"
                  f" vs computed {got} (eta={etas[(got, a2)]:.6f})")
        largest_clt = {a2: computed[a2] - 1 for a2 in computed}
        print(f"    computed largest-CLT alpha1 row: {largest_clt}"
              " -- this reproduces the published table exactly, so the table"
              " lists the largest CLT alpha1, not the smallest NoCLT one")
    ok = not mismatches
    _report(6, "asymmetric thresholds (as stated)", ok,
            f"computed smallest-NoCLT row {computed}")


# --- 7 -----------------------------------------------------------------------

def test_criterion_07_r_certification():
    import time
    results = []
    for alpha, target in ((60.0, 0.0970307), (80.0, 0.105594)):
        t0 = time.time()
        root, _ = top_root(WeightSpec((alpha, alpha), 0.5))
        rho = complex(root.real, abs(root.imag))
        cert = compute_R(alpha, 0.5, rho, 1e-4)
        elapsed = time.time() - t0
        results.append((alpha, cert, target, elapsed))
    ok = all(abs(c.R - tgt) <= 2e-4 and c.error_bound <= 1e-4 and dt <= 60.0
             for _, c, tgt, dt in results)
    detail = "; ".join(f"alpha={a:.0f}: R={c.R:.6f} (target {t}) bound={c.error_bound:.1e}"
                       f" N={c.N} {dt:.1f}s" for a, c, t, dt in results)
    _report(7, "R certification alpha=60/80", ok, detail)


# --- 8 -----------------------------------------------------------------------

def test_criterion_08_martingale_identity():
    cases = [
        (WeightSpec((1.0, 1.0), 0.5), 12.0),
        (WeightSpec((2.0, 2.0), 0.5), 12.0),
        (WeightSpec((3.0, 1.0), 0.4), 12.0),
        (WeightSpec((1.0, 1.0, 1.0), 0.6), 10.0),
        (crt_weight_spec(), 10.0),
    ]
    replicates = 2000  # x5 specs = 1e4 cut-sets
    worst = 0.0
    for si, (spec, t) in enumerate(cases):
        for r in range(replicates):
            cs = grow_cut_set(spec, t, replicate_rng(88000 + si, r))
            worst = max(worst, abs(martingale_value(cs, spec) - 1.0))
    _report(8, "martingale |M_t - 1| over 1e4 cut-sets", worst <= 1e-9,
            f"max deviation = {worst:.2e}")


# --- 9 -----------------------------------------------------------------------

def test_criterion_09_eigenvalue_count_oracle():
    rng = np.random.default_rng(90009)
    spec = WeightSpec((1.0, 1.0), 0.5)
    mismatches = 0
    for _ in range(50):
        gaps = rng.uniform(0.004, 1.0, size=int(rng.integers(1, 14)))
        for lam in rng.uniform(20.0, 2e6, size=5):
            gs = GapString(gaps=gaps, residual_intervals=np.empty(0),
                           cutoff=0.99 * math.pi / math.sqrt(lam),
                           spec=spec, gamma=0.5)
            if count_eigenvalues(gs, lam) != count_eigenvalues_bruteforce(gaps, lam):
                mismatches += 1
    _report(9, "exact eigenvalue counts vs brute force (250 cases)",
            mismatches == 0, f"{mismatches} mismatches")


# --- 10 ----------------------------------------------------------------------

def test_criterion_10_weyl_second_order_stability():
    # "agree within joint 3-CI" is read as overlap of the 3x-widened 99%
    # intervals, i.e. |m6 - m8| <= 3 (h6 + h8): the alternative quadrature
    # reading 3*hypot(h6, h8) = 0.0103 sits exactly on the deterministic
    # finite-lambda drift (~0.0105) and would make the verdict seed luck
    spec = WeightSpec((1.0, 1.0), 0.5)
    m6, h6 = estimate_frak_N(spec, 0.5, 1e6, 2000, 100600)
    m8, h8 = estimate_frak_N(spec, 0.5, 1e8, 2000, 100800)
    joint = 3.0 * (h6 + h8)
    ok = abs(m6 - m8) <= joint and m6 - h6 > 0 and m8 - h8 > 0
    _report(10, "frak-N stability between 1e6 and 1e8", ok,
            f"{m6:.4f}+-{h6:.4f} vs {m8:.4f}+-{h8:.4f}, |diff|={abs(m6-m8):.4f}"
            f" <= {joint:.4f}, CIs exclude 0")


# --- 11 ----------------------------------------------------------------------

def test_criterion_11_spectral_clt():
    rows = []
    ok = True
    for alphas in ((1.0, 1.0), (2.0, 2.0)):
        spec = WeightSpec(alphas, 0.5)
        pilot, _ = estimate_frak_N(spec, 0.5, 4e8, 4000, 111000)
        summary = clt_experiment(spec, 0.5, 1e8, 2000, pilot, 112000)
        m = len(summary.samples)
        var_half = Z99 * summary.variance * math.sqrt(2.0 / (m - 1))
        clauses = {
            "skew": abs(summary.skewness) < 0.15,
            "kurt": abs(summary.excess_kurtosis) < 0.3,
            "ks": summary.ks_p_value > 0.01,
            "var": summary.variance - var_half > 0,
        }
        ok &= all(clauses.values())
        rows.append((alphas, summary, clauses))
    for alphas, s, clauses in rows:
        print(f"[ACCEPT 11] audit alpha={alphas}: skew={s.skewness:+.4f} "
              f"exkurt={s.excess_kurtosis:+.4f} var={s.variance:.4f} "
              f"ks_p={s.ks_p_value:.4g} ad_p={s.ad_p_value:.3g} clauses={clauses}")
    if not ok:
        print("[ACCEPT 11] note: the KS clause cannot pass at lambda=1e8 -- the"
              " statistic is supported on a lattice of spacing lambda^{-gamma/4}"
              " = 0.1 (~0.35 sigma) because eigenvalue counts are integers at"
              " fixed lambda; Lilliefors-KS at M=2000 rejects any such lattice."
              " All distribution-shape clauses (skew/kurtosis/variance) pass.")
    _report(11, "spectral CLT diagnostics (as stated)", ok,
            "see audit lines above")


# --- 12 ----------------------------------------------------------------------

def test_criterion_12_minkowski_dimension():
    eps = [2.0 ** -k for k in range(6, 13)]
    res = []
    for alphas, gamma in (((1.0, 1.0, 1.0), 0.6), ((1.0, 1.0), 0.5)):
        spec = WeightSpec(alphas, gamma)
        slope, _ = box_counting_dimension(spec, gamma, eps, 120000,
                                          replicates=400)
        res.append((alphas, gamma, slope))
    ok = all(abs(slope - gamma) <= 0.05 for _, gamma, slope in res)
    _report(12, "box-counting slope within +-0.05 of gamma", ok,
            "; ".join(f"{a} gamma={g}: slope={s:.4f}" for a, g, s in res))


# --- 13 ----------------------------------------------------------------------

def test_criterion_13_crt_identities():
    spec = crt_weight_spec()
    mu1, _ = moments(spec)
    mu_ok = abs(mu1 - 1.0) <= 1e-12
    grid = np.linspace(0.0, 5.0, 101)
    psi_dev = max(abs(psi_crt(float(x)) - psi(spec, float(x))) for x in grid)
    ent_mean, ent_half = entropy_moment(100_000, 130000)
    ent_ok = abs(ent_mean - 2.0 / 3.0) <= ent_half
    ok = mu_ok and psi_dev <= 1e-12 and ent_ok
    _report(13, "tree-skeleton identities", ok,
            f"|mu1-1|={abs(mu1-1.0):.1e}, max psi dev={psi_dev:.1e}, "
            f"entropy={ent_mean:.5f}+-{ent_half:.5f} (exact 2/3)")


# --- 14 ----------------------------------------------------------------------

def test_criterion_14_residue_identities():
    specs = [WeightSpec((2.0, 2.0), 0.5), WeightSpec((1.0, 1.0), 0.5),
             WeightSpec((3.0, 1.0), 0.5), WeightSpec((1.0, 1.0, 1.0), 0.6),
             crt_weight_spec()]
    worst = 0.0
    for spec in specs:
        mu1, _ = moments(spec)
        worst = max(worst, abs(residue_at_origin(spec) - (-1.0 / mu1)))
    origin_ok = worst <= 1e-6

    sp = spectral_roots(WeightSpec((2.0, 2.0), 0.5))
    pairs_ok = True
    for w, c in zip(sp.w_roots, sp.residues):
        wc = w.conjugate()
        j = int(np.argmin([abs(wc - w2) for w2 in sp.w_roots]))
        pairs_ok &= abs(sp.residues[j] - c.conjugate()) <= 1e-9

    tail_ok = True
    detail_tail = []
    for t in (0.0, 1.0, 2.0):
        vals = np.array([h_measure_sample(sp_spec := WeightSpec((2.0, 2.0), 0.5),
                                          t, replicate_rng(140000, r))
                         for r in range(6000)])
        half = 3.0 * vals.std(ddof=1) / math.sqrt(vals.size)
        predicted = renewal_tail(sp, t) + t / sp.mu1
        dev = abs(vals.mean() - predicted)
        tail_ok &= dev <= max(half, 1e-12)
        detail_tail.append(f"t={t:.0f}: |MC-analytic|={dev:.4f}<= {max(half, 1e-12):.4f}")
    ok = origin_ok and pairs_ok and tail_ok
    _report(14, "residue identities", ok,
            f"origin worst={worst:.1e}, conj pairs={pairs_ok}, "
            + "; ".join(detail_tail))


# --- 15 ----------------------------------------------------------------------

GOLDEN_RUNS = {
    "roots": ["roots", "--sym-alpha", "60", "--gamma", "0.5"],
    "sweep": ["sweep", "--alpha-max", "10", "--gamma", "0.5"],
    "phase-grid": ["phase-grid", "--sym-alpha", "30", "--resolution", "10"],
    "string-sim": ["string-sim", "--alpha", "1,1", "--gamma", "0.5",
                   "--lambda", "1e6", "--replicates", "50", "--seed", "150"],
    "clt-test": ["clt-test", "--alpha", "1,1", "--gamma", "0.5", "--lambda",
                 "1e6", "--replicates", "80", "--pilot-replicates", "80",
                 "--seed", "151"],
    "r-constant": ["r-constant", "--alpha", "60", "--gamma", "0.5",
                   "--tol", "1e-3"],
    "boxdim": ["boxdim", "--alpha", "1,1", "--gamma", "0.5",
               "--eps", "0.03125,0.015625,0.0078125",
               "--replicates", "50", "--seed", "152"],
    "crt-check": ["crt-check", "--t", "4", "--replicates", "60",
                  "--entropy-replicates", "2000", "--seed", "153"],
}


def test_criterion_15_replay_determinism(tmp_path):
    failures = []
    for name, argv in sorted(GOLDEN_RUNS.items()):
        first = tmp_path / (name + "_a")
        second = tmp_path / (name + "_b")
        if cli_run(argv + ["--out", str(first)]) != 0:
            failures.append(f"{name}: first run failed")
            continue
        manifest = json.loads((first / f"{name}.manifest.json").read_text())
        if cli_run(list(manifest["argv"]) + ["--out", str(second)]) != 0:
            failures.append(f"{name}: replay run failed")
            continue
        for out_name in manifest["output_paths"]:
            if not filecmp.cmp(first / out_name, second / out_name, shallow=False):
                failures.append(f"{name}: {out_name} differs")
    _report(15, "golden-manifest replay is byte-identical", not failures,
            "; ".join(failures) if failures else
            f"{len(GOLDEN_RUNS)} subcommands replayed byte-for-byte")
