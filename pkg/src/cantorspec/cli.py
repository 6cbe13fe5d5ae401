"""Command-line front end.

Every subcommand resolves its configuration, runs, writes CSV/JSON
artifacts with fixed formatting (reals as %.17g, '\n' newlines, sorted
JSON keys) and drops a ``<command>.manifest.json`` next to the outputs.
Re-running with the same configuration reproduces the output bytes
exactly; manifests additionally record timestamps and the original argv
for replay.

Exit codes: 0 success, 2 configuration error, 3 numeric-budget error.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import (ApplicabilityError, BudgetError, ConvergenceError,
                     DomainError, ToleranceError)
from .gbp import WeightSpec
from . import crt as crt_mod
from . import renewal
from . import rconst
from . import strings

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    """Fixed 17-significant-digit decimal: round-trip safe and byte-stable."""
    return f"{float(x):.17g}"


def _write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(c if isinstance(c, str) else _fmt(c) for c in row) + "\n")


def _write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_alphas(args) -> tuple:
    if args.alpha and args.sym_alpha is not None:
        raise ConfigError("give either --alpha or --sym-alpha, not both")
    if args.alpha:
        try:
            alphas = tuple(float(p) for p in args.alpha.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad --alpha list: {args.alpha!r}") from exc
        if len(alphas) < 2:
            raise ConfigError("--alpha needs at least two comma-separated values")
        return alphas
    if args.sym_alpha is not None:
        n = args.n if args.n is not None else 2
        if n < 2:
            raise ConfigError("--n must be >= 2")
        return (float(args.sym_alpha),) * n
    raise ConfigError("one of --alpha / --sym-alpha is required")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    if args.strict:
        raise ConfigError("--seed is required in --strict mode")
    return int(np.random.SeedSequence().entropy % (2 ** 63))


def _replicate_seed_value(master_seed: int, r: int) -> int:
    return strings.string_seed(master_seed, r)


def _thread_count(args) -> int:
    if getattr(args, "threads", None):
        return max(1, int(args.threads))
    return max(1, os.cpu_count() or 1)


def _parallel_map(fn, items, threads):
    if threads <= 1 or len(items) < 4:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (threads * 8))))


def _string_replicate(task):
    alphas, gamma, lam, master_seed, r = task
    spec = WeightSpec(alphas, gamma)
    gs = strings.generate_gaps(spec, gamma, math.pi / math.sqrt(lam),
                               strings.string_seed(master_seed, r))
    count = strings.count_eigenvalues(gs, lam)
    nb = math.sqrt(lam) / math.pi - count
    return r, count, nb


def _string_samples(alphas, gamma, lam, replicates, master_seed, threads):
    tasks = [(alphas, gamma, lam, master_seed, r) for r in range(replicates)]
    rows = _parallel_map(_string_replicate, tasks, threads)
    rows.sort(key=lambda t: t[0])
    counts = np.array([c for _, c, _ in rows], dtype=np.int64)
    nbars = np.array([b for _, _, b in rows])
    return counts, nbars


# --- manifest ---------------------------------------------------------------


class RunManifest:
    def __init__(self, command, argv, config, master_seed, output_paths):
        self.command = command
        self.argv = list(argv)
        self.config = config
        self.master_seed = master_seed
        self.output_paths = output_paths
        self.started = None
        self.finished = None

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "master_seed": self.master_seed,
            "tool_version": __version__,
            "started": self.started,
            "finished": self.finished,
            "output_paths": self.output_paths,
        }


def _emit(outdir, command, argv, config, master_seed, started, writers):
    """Run the output writers, then write the manifest."""
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for name, writer in writers:
        path = os.path.join(outdir, name)
        writer(path)
        paths.append(name)
    manifest = RunManifest(command, argv, config, master_seed, paths)
    manifest.started = started
    manifest.finished = datetime.now(timezone.utc).isoformat()
    _write_json(os.path.join(outdir, f"{command}.manifest.json"), manifest.to_dict())
    return 0


# --- subcommands ------------------------------------------------------------


def _cmd_roots(args, argv, started):
    alphas = _parse_alphas(args)
    spec = WeightSpec(alphas, args.gamma)
    spectrum = renewal.spectral_roots(spec)
    payload = {"schema_version": SCHEMA_VERSION, **spectrum.to_dict()}
    config = {"alphas": list(alphas), "gamma": args.gamma}
    return _emit(args.out, "roots", argv, config, None, started,
                 [("roots.json", lambda p: _write_json(p, payload))])


def _cmd_sweep(args, argv, started):
    rows = []
    for alpha in range(1, args.alpha_max + 1):
        spec = WeightSpec((float(alpha), float(alpha)), args.gamma)
        sp = renewal.spectral_roots(spec)
        if sp.theta_roots:
            top = max(sp.theta_roots, key=lambda rm: rm[0].real)[0]
            top = complex(top.real, abs(top.imag))
            rows.append((float(alpha), sp.eta, top.real, top.imag, sp.regime.value))
        else:
            rows.append((float(alpha), sp.eta, math.nan, math.nan, sp.regime.value))
    config = {"alpha_max": args.alpha_max, "gamma": args.gamma}
    return _emit(args.out, "sweep", argv, config, None, started,
                 [("sweep.csv", lambda p: _write_csv(
                     p, ["alpha", "eta", "theta_re", "theta_im", "regime"], rows))])


def _cmd_phase_grid(args, argv, started):
    alphas = _parse_alphas(args)
    spec = WeightSpec(alphas, args.gamma)
    grid = renewal.phase_grid(spec, gamma=args.gamma,
                              re_range=(args.re_min, args.re_max),
                              im_range=(args.im_min, args.im_max),
                              resolution=args.resolution)
    rows = [tuple(row) for row in grid]
    config = {"alphas": list(alphas), "gamma": args.gamma,
              "re_range": [args.re_min, args.re_max],
              "im_range": [args.im_min, args.im_max],
              "resolution": args.resolution}
    return _emit(args.out, "phase-grid", argv, config, None, started,
                 [("phase_grid.csv", lambda p: _write_csv(
                     p, ["w_re", "w_im", "arg", "abs"], rows))])


def _sample_rows(alphas, gamma, lam, master_seed, counts, nbars, frak_n_hat):
    scaled = nbars * lam ** (-gamma / 2.0)
    stat = lam ** (gamma / 4.0) * (scaled - frak_n_hat)
    rows = []
    for r in range(len(counts)):
        rows.append((str(r), str(_replicate_seed_value(master_seed, r)), lam,
                     str(int(counts[r])), nbars[r], scaled[r], stat[r]))
    return rows, scaled, stat


def _cmd_string_sim(args, argv, started):
    alphas = _parse_alphas(args)
    seed = _resolve_seed(args)
    lam = args.lam
    counts, nbars = _string_samples(alphas, args.gamma, lam, args.replicates,
                                    seed, _thread_count(args))
    rows, _, _ = _sample_rows(alphas, args.gamma, lam, seed, counts, nbars,
                              args.frak_n_hat)
    config = {"alphas": list(alphas), "gamma": args.gamma, "lambda": lam,
              "replicates": args.replicates, "frak_n_hat": args.frak_n_hat,
              "master_seed": seed}
    header = ["replicate", "seed", "lambda", "count", "nbar", "scaled", "statistic"]
    return _emit(args.out, "string-sim", argv, config, seed, started,
                 [("samples.csv", lambda p: _write_csv(p, header, rows))])


def _cmd_clt_test(args, argv, started):
    alphas = _parse_alphas(args)
    seed = _resolve_seed(args)
    lam = args.lam
    pilot_lam = args.pilot_lambda if args.pilot_lambda is not None else 4.0 * lam
    pilot_m = args.pilot_replicates if args.pilot_replicates is not None else 2 * args.replicates
    threads = _thread_count(args)
    pilot_counts, pilot_nbars = _string_samples(alphas, args.gamma, pilot_lam,
                                                pilot_m, seed + 1, threads)
    frak_n_hat = float(np.mean(pilot_nbars) * pilot_lam ** (-args.gamma / 2.0))
    counts, nbars = _string_samples(alphas, args.gamma, lam, args.replicates,
                                    seed, threads)
    rows, scaled, stat = _sample_rows(alphas, args.gamma, lam, seed, counts,
                                      nbars, frak_n_hat)
    from scipy import stats as sstats
    from statsmodels.stats.diagnostic import lilliefors, normal_ad
    _, ks_p = lilliefors(stat, dist="norm")
    _, ad_p = normal_ad(stat)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "alphas": list(alphas), "gamma": args.gamma, "lambda": lam,
        "replicates": args.replicates,
        "pilot": {"lambda": pilot_lam, "replicates": pilot_m,
                  "frak_n_hat": frak_n_hat},
        "mean": float(np.mean(stat)),
        "variance": float(np.var(stat, ddof=1)),
        "skewness": float(sstats.skew(stat)),
        "excess_kurtosis": float(sstats.kurtosis(stat)),
        "ks_p_value": float(ks_p),
        "ad_p_value": float(ad_p),
    }
    config = {"alphas": list(alphas), "gamma": args.gamma, "lambda": lam,
              "replicates": args.replicates, "pilot_lambda": pilot_lam,
              "pilot_replicates": pilot_m, "master_seed": seed}
    header = ["replicate", "seed", "lambda", "count", "nbar", "scaled", "statistic"]
    return _emit(args.out, "clt-test", argv, config, seed, started,
                 [("samples.csv", lambda p: _write_csv(p, header, rows)),
                  ("summary.json", lambda p: _write_json(p, summary))])


def _cmd_r_constant(args, argv, started):
    spec = WeightSpec((args.alpha, args.alpha), args.gamma)
    spectrum = renewal.spectral_roots(spec)
    if not spectrum.theta_roots:
        raise ConfigError("no nontrivial roots: R is undefined for this weight")
    rho = max((r for r, _ in spectrum.theta_roots), key=lambda r: r.real)
    rho = complex(rho.real, abs(rho.imag))
    cert = rconst.compute_R(args.alpha, args.gamma, rho, args.tol)
    payload = {"schema_version": SCHEMA_VERSION, **cert.to_dict()}
    config = {"alpha": args.alpha, "gamma": args.gamma, "tol": args.tol}
    return _emit(args.out, "r-constant", argv, config, None, started,
                 [("r_certificate.json", lambda p: _write_json(p, payload))])


def _cmd_boxdim(args, argv, started):
    alphas = _parse_alphas(args)
    seed = _resolve_seed(args)
    try:
        eps_list = [float(p) for p in args.eps.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --eps list: {args.eps!r}") from exc
    spec = WeightSpec(alphas, args.gamma)
    slope, means = strings.box_counting_dimension(spec, args.gamma, eps_list,
                                                  seed, replicates=args.replicates)
    payload = {"schema_version": SCHEMA_VERSION, "alphas": list(alphas),
               "gamma": args.gamma, "slope": slope,
               "eps": sorted(eps_list, reverse=True), "mean_counts": means,
               "replicates": args.replicates}
    config = {"alphas": list(alphas), "gamma": args.gamma, "eps": eps_list,
              "replicates": args.replicates, "master_seed": seed}
    return _emit(args.out, "boxdim", argv, config, seed, started,
                 [("boxdim.json", lambda p: _write_json(p, payload))])


def _cmd_crt_check(args, argv, started):
    seed = _resolve_seed(args)
    report = crt_mod.crt_report(t=args.t, replicates=args.replicates,
                                entropy_replicates=args.entropy_replicates,
                                master_seed=seed)
    payload = {"schema_version": SCHEMA_VERSION, **report}
    config = {"t": args.t, "replicates": args.replicates,
              "entropy_replicates": args.entropy_replicates, "master_seed": seed}
    return _emit(args.out, "crt-check", argv, config, seed, started,
                 [("crt_check.json", lambda p: _write_json(p, payload))])


# --- parser -----------------------------------------------------------------


def _add_weight_args(p):
    p.add_argument("--alpha", help="comma-separated Dirichlet weights a1,a2,...")
    p.add_argument("--sym-alpha", type=float, help="symmetric weight value")
    p.add_argument("--n", type=int, help="offspring count for --sym-alpha (default 2)")


def _add_common(p, seeded):
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--threads", type=int, help="worker pool size (default: cpu count)")
    p.add_argument("--strict", action="store_true",
                   help="fail when a randomized run omits --seed")
    if seeded:
        p.add_argument("--seed", type=int, help="64-bit master seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cantorspec",
        description="Dirichlet-weight branching processes, Cantor-string "
                    "spectra, and renewal-rate regime analysis")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="spectral roots and regime for one weight vector")
    _add_weight_args(p)
    p.add_argument("--gamma", type=float, default=0.5)
    _add_common(p, seeded=False)

    p = sub.add_parser("sweep", help="eta and regime over symmetric alpha = 1..A")
    p.add_argument("--alpha-max", type=int, default=80)
    p.add_argument("--gamma", type=float, default=0.5)
    _add_common(p, seeded=False)

    p = sub.add_parser("phase-grid", help="grid of arg/abs of 1 - f(gamma w)")
    _add_weight_args(p)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--re-min", type=float, default=0.0)
    p.add_argument("--re-max", type=float, default=2.0)
    p.add_argument("--im-min", type=float, default=8.0)
    p.add_argument("--im-max", type=float, default=10.0)
    p.add_argument("--resolution", type=int, default=64)
    _add_common(p, seeded=False)

    p = sub.add_parser("string-sim", help="per-replicate spectral samples")
    _add_weight_args(p)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--frak-n-hat", type=float, default=0.0,
                   help="centring constant for the statistic column")
    _add_common(p, seeded=True)

    p = sub.add_parser("clt-test", help="two-stage CLT normality diagnostics")
    _add_weight_args(p)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--replicates", type=int, default=2000)
    p.add_argument("--pilot-lambda", type=float)
    p.add_argument("--pilot-replicates", type=int)
    _add_common(p, seeded=True)

    p = sub.add_parser("r-constant", help="certified oscillation amplitude R")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-4)
    _add_common(p, seeded=False)

    p = sub.add_parser("boxdim", help="box-counting dimension estimate")
    _add_weight_args(p)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--eps", default="0.015625,0.0078125,0.00390625,"
                                    "0.001953125,0.0009765625,0.00048828125,"
                                    "0.000244140625")
    p.add_argument("--replicates", type=int, default=400)
    _add_common(p, seeded=True)

    p = sub.add_parser("crt-check", help="tree-skeleton identity checks")
    p.add_argument("--t", type=float, default=6.0)
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--entropy-replicates", type=int, default=100000)
    _add_common(p, seeded=True)
    return ap


_DISPATCH = {
    "roots": _cmd_roots,
    "sweep": _cmd_sweep,
    "phase-grid": _cmd_phase_grid,
    "string-sim": _cmd_string_sim,
    "clt-test": _cmd_clt_test,
    "r-constant": _cmd_r_constant,
    "boxdim": _cmd_boxdim,
    "crt-check": _cmd_crt_check,
}


def run(argv) -> int:
    started = datetime.now(timezone.utc).isoformat()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args, list(argv), started)
    except (ConfigError, DomainError, ApplicabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetError, ToleranceError, ConvergenceError) as exc:
        print(f"numeric budget error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
