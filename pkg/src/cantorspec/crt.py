"""Computable checks for the Brownian-tree self-similar skeleton.

The tree's recursive three-way mass split is Dirichlet(1/2, 1/2, 1/2)
with birth increments -(3/2) ln(mass), i.e. the branching skeleton is the
simplex-weight process with alphas (1/2, 1/2, 1/2) and gamma = 2/3.  In
that case psi collapses to the rational function 3/(1+2x), the renewal
mean is exactly 1, and the fundamental martingale is identically one;
this module re-derives each of those facts numerically from the generic
machinery as consistency checks.
"""

import math

import numpy as np

from .errors import DomainError
from .gbp import (WeightSpec, grow_cut_set, martingale_value, replicate_rng,
                  _dirichlet_rows)
from . import renewal

_Z99 = 2.5758293035489004


def crt_weight_spec() -> WeightSpec:
    """The branching skeleton of the tree: Dirichlet(1/2,1/2,1/2), gamma=2/3."""
    return WeightSpec((0.5, 0.5, 0.5), 2.0 / 3.0)


def psi_crt(x: float) -> float:
    """Closed form psi(x) = 3/(1+2x) for the (1/2,1/2,1/2) weights."""
    if not x > -0.5:
        raise DomainError("psi_crt needs x > -1/2")
    return 3.0 / (1.0 + 2.0 * x)


def entropy_moment(replicates: int, master_seed: int):
    """MC estimate of E sum_j Delta_j |ln Delta_j| for a Dirichlet(1/2^3)
    split; the exact value is 2/3.  Returns (mean, 99%-CI half-width)."""
    if replicates < 1000:
        raise DomainError("need at least 1e3 replicates")
    rng = replicate_rng(master_seed, 0)
    rows = _dirichlet_rows(crt_weight_spec(), rng, replicates)
    vals = np.sum(rows * np.abs(np.log(rows)), axis=1)
    mean = float(np.mean(vals))
    half = float(_Z99 * np.std(vals, ddof=1) / math.sqrt(replicates))
    return mean, half


def crt_martingale_check(t: float, replicates: int, master_seed: int) -> float:
    """max over replicates of |M_t - 1| for the tree skeleton."""
    spec = crt_weight_spec()
    worst = 0.0
    for r in range(replicates):
        cs = grow_cut_set(spec, t, replicate_rng(master_seed, r))
        worst = max(worst, abs(martingale_value(cs, spec) - 1.0))
    return worst


def crt_report(t: float = 6.0, replicates: int = 1000,
               entropy_replicates: int = 100_000, master_seed: int = 0,
               psi_grid=None) -> dict:
    """All module checks bundled for serialization."""
    spec = crt_weight_spec()
    if psi_grid is None:
        psi_grid = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0]
    psi_checks = []
    for x in psi_grid:
        closed = psi_crt(float(x))
        generic = renewal.psi(spec, float(x))
        psi_checks.append({"x": float(x), "closed_form": closed,
                           "generic": generic, "abs_diff": abs(closed - generic)})
    mu1, _ = renewal.moments(spec)
    ent_mean, ent_ci = entropy_moment(entropy_replicates, master_seed)
    max_dev = crt_martingale_check(t, replicates, master_seed + 1)
    return {
        "psi_checks": psi_checks,
        "mu1": mu1,
        "entropy_moment": {"mean": ent_mean, "ci_half_width": ent_ci,
                           "exact": 2.0 / 3.0},
        "martingale_max_dev": max_dev,
    }
