"""Random self-similar Cantor strings and their Dirichlet spectra.

A string is built by repeatedly replacing an interval of length L by n
children of lengths T_i^(1/gamma) L flush with its endpoints and n-1
equal interior gaps of length S*L, S = (1 - sum_i T_i^(1/gamma))/(n-1).
The open set is the union of all gaps; its Dirichlet eigenvalues are the
union over gaps g of (k pi / g)^2.

Eigenvalue counting is exact, not asymptotic: once every interval still
unexpanded is shorter than pi/sqrt(lambda), none of its future gaps can
host an eigenvalue <= lambda, so N(lambda) = sum over generated gaps of
floor(g sqrt(lambda)/pi).

The two-stage CLT experiment follows the estimate-then-test discipline:
the centring constant is estimated from an independent pilot (different
seed and larger lambda), never from the samples under test.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sstats
from statsmodels.stats.diagnostic import lilliefors, normal_ad

from .errors import BudgetError, DomainError
from .gbp import WeightSpec, _dirichlet_rows, covering_count, replicate_rng

DEFAULT_GAP_CAP = 10_000_000
_Z99 = 2.5758293035489004  # 99% two-sided normal quantile


@dataclass
class GapString:
    """Gap lengths of one sampled string, enumerated down to ``cutoff``,
    plus the retained (not yet subdivided) intervals below the cutoff."""

    gaps: np.ndarray
    residual_intervals: np.ndarray
    cutoff: float
    spec: WeightSpec
    gamma: float
    seed: int | None = None

    @property
    def total_mass(self) -> float:
        return float(math.fsum(self.gaps) + math.fsum(self.residual_intervals))


@dataclass
class CltSample:
    lam: float
    count: int
    nbar: float
    scaled: float       # lambda^{-gamma/2} * nbar
    statistic: float    # lambda^{gamma/4} (scaled - frak_N_hat)


@dataclass
class CltSummary:
    samples: list
    frak_n_hat: float
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks_p_value: float
    ad_p_value: float

    def to_dict(self) -> dict:
        return {
            "frak_n_hat": self.frak_n_hat,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "ks_p_value": self.ks_p_value,
            "ad_p_value": self.ad_p_value,
            "replicates": len(self.samples),
        }


# --- counter-based keyed sampling -------------------------------------------
#
# Refinement coupling requires that the Dirichlet draw attached to an
# interval depend only on (seed, path), never on which other intervals
# happen to be expanded.  Per-node numpy Generators are far too slow to
# construct, so the keyed path uses splitmix64 counter streams hashed
# from the node-path hash, feeding a vectorised Marsaglia-Tsang gamma
# sampler (with the standard u^(1/a) boost for shape < 1).

_U64 = np.uint64
_MIX_GOLD = _U64(0x9E3779B97F4A7C15)
_MIX_M1 = _U64(0xBF58476D1CE4E5B9)
_MIX_M2 = _U64(0x94D049BB133111EB)
_LANE_STEP = _U64(0xD1342543DE82EF95)
_COMP_STEP = _U64(0xA24BAED4963EE407)


def _mix64(z: np.ndarray) -> np.ndarray:
    # modular uint64 arithmetic throughout: wrapping is the point
    with np.errstate(over="ignore"):
        z = (z + _MIX_GOLD)
        z = (z ^ (z >> _U64(30))) * _MIX_M1
        z = (z ^ (z >> _U64(27))) * _MIX_M2
        return z ^ (z >> _U64(31))


def _lane_uniform(h: np.ndarray, lane) -> np.ndarray:
    """Uniform in (0, 1], one value per key, lane-indexed counter stream."""
    with np.errstate(over="ignore"):
        bits = _mix64(h + _U64(lane % (1 << 64)) * _LANE_STEP)
    return ((bits >> _U64(11)) + _U64(1)) * (2.0 ** -53)


def _keyed_gamma(h: np.ndarray, shape: float, lane0: int) -> np.ndarray:
    """Marsaglia-Tsang gamma(shape) draws keyed by h (one per key)."""
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(h.shape)
    todo = np.ones(h.shape, dtype=bool)
    lane = lane0
    for _ in range(64):
        hh = h[todo]
        u1 = _lane_uniform(hh, lane)
        u2 = _lane_uniform(hh, lane + 1)
        uu = _lane_uniform(hh, lane + 2)
        lane += 3
        x = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
        v = (1.0 + c * x) ** 3
        ok = v > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            accept = ok & (np.log(uu) < 0.5 * x * x + d - d * v + d * np.where(ok, np.log(np.where(ok, v, 1.0)), 0.0))
        idx = np.nonzero(todo)[0][accept]
        out[idx] = d * v[accept]
        todo[idx] = False
        if not todo.any():
            break
    else:  # pragma: no cover - acceptance prob ~96% per round
        raise BudgetError("keyed gamma sampler failed to accept")
    if boost:
        ub = _lane_uniform(h, lane0 + 997)
        out *= ub ** (1.0 / shape)
    return out


def _node_rows(spec: WeightSpec, hashes: np.ndarray) -> np.ndarray:
    """One Dirichlet row per node hash (sum exactly 1 after fix-up)."""
    n = spec.n
    rows = np.empty((hashes.size, n))
    for c, shape in enumerate(spec.alphas):
        with np.errstate(over="ignore"):
            comp_keys = _mix64(hashes + _U64(c + 1) * _COMP_STEP)
        rows[:, c] = _keyed_gamma(comp_keys, float(shape), 0)
    tot = rows.sum(axis=1, keepdims=True)
    t = rows / tot
    bad = ~np.all(np.isfinite(t) & (t > 0.0) & (t < 1.0), axis=1)
    if bad.any():
        # immeasurably rare: re-key the offending nodes deterministically
        t[bad] = _node_rows(spec, _mix64(hashes[bad] ^ _MIX_GOLD))[:, :]
    idx = np.argmax(t, axis=1)
    rowsel = np.arange(t.shape[0])
    t[rowsel, idx] += 1.0 - t.sum(axis=1)
    return t


def _child_hashes(parent: np.ndarray, n: int) -> np.ndarray:
    """Path hashes of the n children of each parent hash, child-major."""
    kids = np.repeat(parent, n)
    offsets = np.tile(np.arange(1, n + 1, dtype=np.uint64), parent.size)
    with np.errstate(over="ignore"):
        return _mix64(kids ^ _mix64(offsets * _LANE_STEP))


def generate_gaps(spec: WeightSpec, gamma: float | None, cutoff: float,
                  rng, gap_cap: int = DEFAULT_GAP_CAP,
                  seed: int | None = None) -> GapString:
    """Sample one string, enumerating every gap whose parent interval has
    length >= cutoff; intervals below the cutoff are left as residuals.

    ``rng`` is either an integer seed (preferred: per-interval draws are
    then keyed by the interval's address, making the realisation coupled
    across cutoff refinements) or a numpy Generator (stream mode: valid
    geometry, but refining the cutoff resamples the tree).
    """
    g = spec.gamma if gamma is None else float(gamma)
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    keyed = isinstance(rng, (int, np.integer))
    if keyed:
        seed = int(rng) & 0xFFFFFFFFFFFFFFFF
    inv_gamma = 1.0 / g
    n = spec.n
    if 1.0 < cutoff:
        return GapString(gaps=np.empty(0), residual_intervals=np.array([1.0]),
                         cutoff=float(cutoff), spec=spec, gamma=g, seed=seed)
    active = np.array([1.0])
    active_hash = _mix64(np.array([seed if keyed else 0], dtype=np.uint64))
    gaps = []
    residual = []
    total_gaps = 0
    while active.size:
        if keyed:
            t = _node_rows(spec, active_hash)
        else:
            t = _dirichlet_rows(spec, rng, active.size)
        ratios = t ** inv_gamma
        s_col = (1.0 - ratios.sum(axis=1)) / (n - 1)
        # rounding can push S to 0 for extreme draws; it is positive a.s.
        s_col = np.maximum(s_col, 0.0)
        new_gaps = np.repeat(s_col * active, n - 1)
        total_gaps += new_gaps.size
        if total_gaps > gap_cap:
            raise BudgetError(f"gap count exceeded cap {gap_cap}")
        gaps.append(new_gaps)
        children = (ratios * active[:, None]).ravel()
        below = children < cutoff
        residual.append(children[below])
        active = children[~below]
        if keyed:
            active_hash = _child_hashes(active_hash, n)[~below]
    gaps_arr = np.concatenate(gaps) if gaps else np.empty(0)
    resid_arr = np.concatenate(residual) if residual else np.empty(0)
    return GapString(gaps=gaps_arr, residual_intervals=resid_arr, cutoff=float(cutoff),
                     spec=spec, gamma=g, seed=seed)


def count_eigenvalues(gap_string: GapString, lam: float) -> int:
    """Exact N(lambda): eigenvalues of a gap of length g are (k pi/g)^2,
    so each gap contributes floor(g sqrt(lambda)/pi); the cutoff condition
    guarantees residual intervals contribute nothing."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    if gap_string.cutoff > math.pi / math.sqrt(lam):
        raise DomainError(
            "cutoff too coarse for this lambda: need cutoff <= pi/sqrt(lambda)")
    if gap_string.gaps.size == 0:
        return 0
    return int(np.floor(gap_string.gaps * (math.sqrt(lam) / math.pi)).sum())


def count_eigenvalues_bruteforce(gaps, lam: float) -> int:
    """Independent oracle: explicitly enumerate (k pi / g)^2 <= lambda."""
    total = 0
    for g in gaps:
        k = 1
        while (k * math.pi / g) ** 2 <= lam:
            total += 1
            k += 1
    return total


def nbar(gap_string: GapString, lam: float) -> float:
    """Weyl remainder (1/pi) sqrt(lambda) - N(lambda); vol_1 = 1 because
    the boundary Cantor set is Lebesgue-null (its dimension gamma < 1)."""
    return math.sqrt(lam) / math.pi - count_eigenvalues(gap_string, lam)


def _string_cutoff(lam: float) -> float:
    return math.pi / math.sqrt(lam)


def string_seed(master_seed: int, replicate: int) -> int:
    """64-bit per-replicate seed for address-keyed string generation."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(replicate,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def scaled_nbar_samples(spec: WeightSpec, gamma: float | None, lam: float,
                        replicates: int, master_seed: int,
                        gap_cap: int = DEFAULT_GAP_CAP):
    """Per-replicate (count, nbar, scaled) arrays for independent strings."""
    g = spec.gamma if gamma is None else float(gamma)
    cutoff = _string_cutoff(lam)
    counts = np.empty(replicates, dtype=np.int64)
    nbars = np.empty(replicates)
    for r in range(replicates):
        gs = generate_gaps(spec, g, cutoff, string_seed(master_seed, r),
                           gap_cap=gap_cap)
        counts[r] = count_eigenvalues(gs, lam)
        nbars[r] = math.sqrt(lam) / math.pi - counts[r]
    scaled = nbars * lam ** (-g / 2.0)
    return counts, nbars, scaled


def estimate_frak_N(spec: WeightSpec, gamma: float | None, lam: float,
                    replicates: int, master_seed: int,
                    gap_cap: int = DEFAULT_GAP_CAP):
    """MC mean and 99% CI half-width of lambda^{-gamma/2} Nbar(lambda),
    the desk-scale estimate of the Weyl second-order constant."""
    if replicates < 30:
        raise DomainError("need at least 30 replicates")
    _, _, scaled = scaled_nbar_samples(spec, gamma, lam, replicates, master_seed,
                                       gap_cap=gap_cap)
    mean = float(np.mean(scaled))
    half = float(_Z99 * np.std(scaled, ddof=1) / math.sqrt(replicates))
    return mean, half


def clt_experiment(spec: WeightSpec, gamma: float | None, lam: float,
                   replicates: int, frak_N_hat: float, master_seed: int,
                   gap_cap: int = DEFAULT_GAP_CAP) -> CltSummary:
    """Normality diagnostics for lambda^{gamma/4}(scaled - frak_N_hat).

    frak_N_hat must come from a separate pilot run (other seed / lambda);
    KS is Lilliefors-corrected and AD uses the estimated-parameter
    variant, both appropriate for a normal with fitted mean/variance.
    """
    g = spec.gamma if gamma is None else float(gamma)
    counts, nbars, scaled = scaled_nbar_samples(spec, g, lam, replicates,
                                                master_seed, gap_cap=gap_cap)
    statistic = lam ** (g / 4.0) * (scaled - frak_N_hat)
    samples = [CltSample(lam=lam, count=int(c), nbar=float(b), scaled=float(s),
                         statistic=float(z))
               for c, b, s, z in zip(counts, nbars, scaled, statistic)]
    ks_stat, ks_p = lilliefors(statistic, dist="norm")
    ad_stat, ad_p = normal_ad(statistic)
    return CltSummary(
        samples=samples,
        frak_n_hat=float(frak_N_hat),
        mean=float(np.mean(statistic)),
        variance=float(np.var(statistic, ddof=1)),
        skewness=float(sstats.skew(statistic)),
        excess_kurtosis=float(sstats.kurtosis(statistic)),
        ks_p_value=float(ks_p),
        ad_p_value=float(ad_p),
    )


def box_counting_dimension(spec: WeightSpec, gamma: float | None, eps_list,
                           master_seed: int, replicates: int = 400):
    """Least-squares slope of ln E|Lambda_{ln 1/eps}| against ln(1/eps).

    Returns (slope, mean_counts).  The slope estimates the Minkowski
    dimension of the boundary set, i.e. gamma."""
    g = spec.gamma if gamma is None else float(gamma)
    eff = spec.with_gamma(g)
    if len(list(eps_list)) < 3:
        raise DomainError("need at least 3 eps values")
    means = []
    xs = []
    for j, eps in enumerate(sorted(eps_list, reverse=True)):
        counts = [covering_count(eff, eps, replicate_rng(master_seed, j * replicates + r))
                  for r in range(replicates)]
        means.append(float(np.mean(counts)))
        xs.append(math.log(1.0 / eps))
    slope = float(np.polyfit(xs, np.log(means), 1)[0])
    return slope, means
