"""Simplex-weight general branching process simulation.

Individuals carry multiplicative weights W_x = exp(-gamma * sigma_x); a
parent of weight W spawns n children of weights W*T_1..W*T_n where
(T_1..T_n) is a fresh Dirichlet(alpha) draw.  Because each draw sums to
one exactly (after a one-ulp fix-up), the coming-generation martingale
sum(W_x) over a cut-set telescopes to 1 up to a few units of rounding,
which is what makes the 1e-9 martingale checks meaningful.

Growth is level-by-level with numpy batch sampling, so nothing global is
materialised beyond the current frontier and the accumulated cut-set.
All randomness flows through an injected numpy Generator; replicate r of
a run derives its generator from SeedSequence(master_seed, spawn_key=(r,)),
making replicates independent and order-insensitive.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, DomainError

DEFAULT_MEMBER_CAP = 10_000_000


@dataclass(frozen=True)
class WeightSpec:
    """Dirichlet weight vector plus the Malthusian exponent gamma.

    gamma doubles as the fractal (Minkowski) dimension of the boundary set
    in the string construction, hence the (0, 1) restriction.
    """

    alphas: tuple
    gamma: float

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if len(alphas) < 2:
            raise DomainError("need at least two offspring weights")
        if any(not a > 0 for a in alphas):
            raise DomainError("all Dirichlet parameters must be positive")
        if not 0.0 < self.gamma < 1.0:
            raise DomainError("gamma must lie in (0, 1)")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def alpha0(self) -> float:
        return float(sum(self.alphas))

    def with_gamma(self, gamma: float) -> "WeightSpec":
        return WeightSpec(self.alphas, gamma)


@dataclass(frozen=True)
class Individual:
    address: tuple  # child indices along the ancestral path, 1-based
    sigma: float


@dataclass
class CutSet:
    """The coming generation Lambda_t: individuals born after t whose
    parents were born up to t."""

    horizon: float
    sigmas: np.ndarray          # birth times, traversal order
    weights: np.ndarray         # exp(-gamma * sigma), carried exactly
    spec: WeightSpec
    rng_seed: int | None = None
    addresses: list | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return int(self.sigmas.size)

    @property
    def members(self) -> list:
        if self.addresses is None:
            raise DomainError("cut-set was grown without address tracking")
        return [Individual(a, float(s)) for a, s in zip(self.addresses, self.sigmas)]


def replicate_rng(master_seed: int, replicate: int) -> np.random.Generator:
    """Independent generator for one replicate (hash-mixed, order-free)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(replicate,))
    return np.random.Generator(np.random.PCG64(ss))


def _dirichlet_rows(spec: WeightSpec, rng: np.random.Generator, m: int) -> np.ndarray:
    """m Dirichlet(alpha) rows; each row sums to exactly 1.0.

    numpy's Generator.gamma is Marsaglia-Tsang with the shape<1 power
    boost, which is exactly the sampler wanted here.  Degenerate rows
    (a zero or non-finite component after normalisation) are redrawn.
    """
    alphas = np.asarray(spec.alphas)
    rows = rng.gamma(alphas, size=(m, spec.n))
    for _ in range(100):
        tot = rows.sum(axis=1, keepdims=True)
        t = rows / tot
        bad = ~np.all(np.isfinite(t) & (t > 0.0) & (t < 1.0), axis=1)
        if not bad.any():
            break
        rows[bad] = rng.gamma(alphas, size=(int(bad.sum()), spec.n))
    else:
        raise BudgetError("could not draw a non-degenerate simplex point")
    # push the rounding residual into the largest component: row sums
    # become exactly 1 and positivity is preserved
    idx = np.argmax(t, axis=1)
    rowsel = np.arange(m)
    t[rowsel, idx] += 1.0 - t.sum(axis=1)
    return t


def sample_simplex(spec: WeightSpec, rng: np.random.Generator) -> np.ndarray:
    """One Dirichlet(alpha) draw (T_1..T_n) whose exactly-rounded total
    (math.fsum) equals 1.0: the largest component absorbs the residual,
    nudged by ulps until the Shewchuk sum lands exactly on 1."""
    row = _dirichlet_rows(spec, rng, 1)[0]
    j = int(np.argmax(row))
    for _ in range(10):
        d = 1.0 - math.fsum(row)
        if d == 0.0:
            break
        bumped = row[j] + d
        if bumped == row[j]:
            bumped = np.nextafter(row[j], row[j] + math.copysign(1.0, d))
        row[j] = bumped
    return row


def grow_cut_set(spec: WeightSpec, t: float, rng: np.random.Generator,
                 member_cap: int = DEFAULT_MEMBER_CAP,
                 track_addresses: bool = False,
                 rng_seed: int | None = None) -> CutSet:
    """Grow the population until every line of descent crosses time t and
    return the cut-set Lambda_t.

    Expansion is breadth-first: any individual with sigma <= t (weight >=
    e^{-gamma t}) is expanded; children falling strictly beyond t join the
    cut-set.  Termination is a.s. since every birth increment is positive;
    the expected member count is Theta(e^{gamma t}).
    """
    if t < 0:
        raise DomainError("horizon t must be >= 0")
    wmin = math.exp(-spec.gamma * t)
    active_w = np.array([1.0])
    active_addr = [()] if track_addresses else None
    out_w = []
    out_addr = [] if track_addresses else None
    total_members = 0
    while active_w.size:
        m = active_w.size
        tmat = _dirichlet_rows(spec, rng, m)
        child_w = (active_w[:, None] * tmat).ravel()
        is_member = child_w < wmin
        total_members += int(is_member.sum())
        if total_members + int((~is_member).sum()) > member_cap:
            raise BudgetError(
                f"cut-set exceeded member cap {member_cap} at horizon t={t}")
        out_w.append(child_w[is_member])
        if track_addresses:
            kids = [parent + (i + 1,) for parent in active_addr for i in range(spec.n)]
            out_addr.extend(a for a, flag in zip(kids, is_member) if flag)
            active_addr = [a for a, flag in zip(kids, is_member) if not flag]
        active_w = child_w[~is_member]
    weights = np.concatenate(out_w) if out_w else np.empty(0)
    sigmas = -np.log(weights) / spec.gamma
    return CutSet(horizon=float(t), sigmas=sigmas, weights=weights, spec=spec,
                  rng_seed=rng_seed, addresses=out_addr)


def _kahan_sum(values: np.ndarray) -> float:
    """Compensated (Shewchuk-exact) sum; order-insensitive result."""
    return float(math.fsum(values))


def martingale_value(cut_set: CutSet, spec: WeightSpec) -> float:
    """sum of e^{-gamma sigma_x} over the cut-set; identically 1 for
    simplex weights up to accumulated rounding."""
    if cut_set.spec.alphas != spec.alphas or cut_set.spec.gamma != spec.gamma:
        raise DomainError("cut-set was grown under a different spec")
    return _kahan_sum(cut_set.weights)


def martingale_max_deviation(spec: WeightSpec, t: float, replicates: int,
                             master_seed: int,
                             member_cap: int = DEFAULT_MEMBER_CAP) -> float:
    """max over replicates of |M_t - 1|."""
    worst = 0.0
    for r in range(replicates):
        cs = grow_cut_set(spec, t, replicate_rng(master_seed, r), member_cap=member_cap)
        worst = max(worst, abs(martingale_value(cs, spec) - 1.0))
    return worst


def covering_count(spec: WeightSpec, eps: float, rng: np.random.Generator,
                   member_cap: int = DEFAULT_MEMBER_CAP) -> int:
    """|Lambda_t| at t = ln(1/eps): the number of construction pieces of
    size < eps whose parent piece has size >= eps."""
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0, 1)")
    cs = grow_cut_set(spec, math.log(1.0 / eps), rng, member_cap=member_cap)
    return len(cs)


def h_measure_sample(spec: WeightSpec, t: float, rng: np.random.Generator,
                     member_cap: int = DEFAULT_MEMBER_CAP) -> float:
    """One replicate of sum_{x: sigma_x <= t} e^{-gamma sigma_x}, whose
    expectation is the renewal measure H(t) of nu_gamma (the root's unit
    weight contributes the n=0 convolution term)."""
    if t < 0:
        raise DomainError("t must be >= 0")
    wmin = math.exp(-spec.gamma * t)
    active_w = np.array([1.0])
    acc = [1.0]
    total = 1
    while active_w.size:
        tmat = _dirichlet_rows(spec, rng, active_w.size)
        child_w = (active_w[:, None] * tmat).ravel()
        active_w = child_w[child_w >= wmin]
        total += active_w.size
        if total > member_cap:
            raise BudgetError("renewal-measure sample exceeded member cap")
        if active_w.size:
            acc.append(_kahan_sum(active_w))
    return float(math.fsum(acc))


def depth_weighted_sum(spec: WeightSpec, y: float, depth: int,
                       rng: np.random.Generator) -> float:
    """One replicate of sum over all |x| <= depth of e^{-y gamma sigma_x}
    (full n-ary tree; the expectation is sum_{k<=depth} psi(y)^k)."""
    if depth < 0:
        raise DomainError("depth must be >= 0")
    w = np.array([1.0])
    acc = [1.0]
    for _ in range(depth):
        tmat = _dirichlet_rows(spec, rng, w.size)
        w = (w[:, None] * tmat).ravel()
        acc.append(_kahan_sum(w ** y))
    return float(math.fsum(acc))
