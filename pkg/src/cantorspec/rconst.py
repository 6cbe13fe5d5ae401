"""Certified evaluation of the oscillation amplitude R.

In the slow-renewal regime the second-order spectral term oscillates with
amplitude R = |I(a)| where, for a = gamma*(1 - rho) and rho the leading
root pair,

    I(a) = integral_0^inf e^{-a y} E phi(y) dy,
    phi(y) = Stilde e^y - floor(Stilde e^y),   Stilde = S / pi,
    S = 1 - T^{1/gamma} - (1-T)^{1/gamma},     T ~ Beta(alpha, alpha).

Expanding the sawtooth over its breakpoints gives
I = E[Stilde^a] sum_{n>=0} a_n - a_0 E[Stilde], with a_0 = 1/(1-a) and

    a_n = n^{1-a} / (a(1-a)) * ((1+1/n)^{-a} (1 + a/n) - 1).

Since a_n = n^{-1-a}/2 + O(n^{-2-Re a}) with the explicit constant f(a)
below, truncating at N and replacing the tail of the n^{-1-a}/2 part by
zeta(1+a) leaves a rigorously bounded remainder:

    |truncation error| <= E[Stilde^{Re a}] * N^{-1-Re a} f(a) / (1 + Re a).

compute_R picks the smallest N meeting the target, evaluates the partial
sums with exact (Shewchuk) summation in descending order, and returns a
certificate carrying both the truncation bound and the quadrature error.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ToleranceError
from .numerics.quadrature import adaptive_gauss_kronrod
from .numerics.special import complex_zeta, log_gamma

_N_CAP = 100_000_000


@dataclass
class RCertificate:
    alpha: float
    gamma: float
    rho: complex
    a: complex
    estimate: complex
    R: float
    phase: float
    N: int
    error_bound: float
    quadrature_error: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "rho": [self.rho.real, self.rho.imag],
            "a": [self.a.real, self.a.imag],
            "estimate": [self.estimate.real, self.estimate.imag],
            "R": self.R,
            "phase": self.phase,
            "N": self.N,
            "error_bound": self.error_bound,
            "quadrature_error": self.quadrature_error,
        }


def _stable_s(t: float, inv_gamma: float) -> float:
    """S(t) = 1 - t^{1/gamma} - (1-t)^{1/gamma} without cancellation for
    small t (callers fold t > 1/2 onto 1-t; S is symmetric)."""
    return -math.expm1(inv_gamma * math.log1p(-t)) - t ** inv_gamma


def s_tilde_moment(alpha: float, gamma: float, a, tol: float = 1e-10):
    """E[(S/pi)^a] for T ~ Beta(alpha, alpha); a may be complex.

    Folded onto t in (0, 1/2] (the law of S is symmetric under t -> 1-t)
    so the a-power of the vanishing S(t) ~ t/gamma is evaluated stably at
    both ends.  Returns (value, quadrature_error_estimate)."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if not 0.0 < gamma < 1.0:
        raise DomainError("gamma must lie in (0, 1)")
    a = complex(a)
    if a.real < 0:
        raise DomainError("need Re a >= 0 for an integrable moment")
    inv_gamma = 1.0 / gamma
    log_pi = math.log(math.pi)
    log_norm = 2.0 * log_gamma(alpha) - log_gamma(2.0 * alpha)

    if a == 0:
        return 1.0 + 0.0j, 0.0

    def integrand(t):
        if t <= 0.0:
            return 0.0
        s = _stable_s(t, inv_gamma)
        if s <= 0.0:
            return 0.0
        log_w = (alpha - 1.0) * (math.log(t) + math.log1p(-t)) - log_norm
        if log_w < -700.0:
            return 0.0
        power = a * (math.log(s) - log_pi)
        return 2.0 * cmath.exp(power + log_w)

    value, err = adaptive_gauss_kronrod(integrand, 0.0, 0.5, tol=tol)
    return value, err


def series_term(n: int, a) -> complex:
    """a_n = n^{1-a}/(a(1-a)) ((1+1/n)^{-a}(1+a/n) - 1), evaluated in the
    cancellation-free form expm1(-a log1p(1/n) + log(1+a/n))."""
    if n < 1:
        raise DomainError("n must be >= 1")
    a = complex(a)
    if a == 0 or a == 1:
        raise DomainError("a must avoid 0 and 1")
    vals = _series_terms(np.array([n], dtype=float), a)
    return complex(vals[0])


def _clog1p_array(z: np.ndarray) -> np.ndarray:
    x = z.real
    y = z.imag
    return 0.5 * np.log1p(2.0 * x + x * x + y * y) + 1j * np.arctan2(y, 1.0 + x)


def _cexpm1_array(z: np.ndarray) -> np.ndarray:
    x = z.real
    y = z.imag
    half = np.sin(0.5 * y)
    return (np.expm1(x) * np.cos(y) - 2.0 * half * half) + 1j * (np.exp(x) * np.sin(y))


def _series_terms(ns: np.ndarray, a: complex) -> np.ndarray:
    inv = 1.0 / ns
    inner = -a * _clog1p_array(inv.astype(complex)) + _clog1p_array(a * inv)
    pref = np.exp((1.0 - a) * np.log(ns)) / (a * (1.0 - a))
    return pref * _cexpm1_array(inner)


def f_bound(a) -> float:
    """f(a) = (1/|a(1-a)|) (|a^2(a+1)|/2 + 2^{4+Re a} e^{pi |Im a|/6} |1+a|),
    the explicit constant in |a_n - n^{-1-a}/2| <= n^{-2-Re a} f(a), n >= 4."""
    a = complex(a)
    if a == 0 or a == 1:
        raise DomainError("a must avoid 0 and 1")
    lead = 1.0 / abs(a * (1.0 - a))
    return lead * (abs(a * a * (a + 1.0)) / 2.0
                   + 2.0 ** (4.0 + a.real) * math.exp(math.pi * abs(a.imag) / 6.0)
                   * abs(1.0 + a))


def _descending_fsum(values: np.ndarray) -> complex:
    """Exactly-rounded complex sum (Shewchuk), terms fed smallest-n-last."""
    rev = values[::-1]
    return complex(math.fsum(rev.real), math.fsum(rev.imag))


def _partial_sums(a: complex, n_terms: int, block: int = 1_000_000):
    """(sum_{n<=N} a_n, sum_{n<=N} n^{-(1+a)}) with fixed-block evaluation."""
    s_an = []
    s_pw = []
    for start in range(1, n_terms + 1, block):
        stop = min(start + block - 1, n_terms)
        ns = np.arange(start, stop + 1, dtype=float)
        s_an.append(_descending_fsum(_series_terms(ns, a)))
        s_pw.append(_descending_fsum(np.exp(-(1.0 + a) * np.log(ns))))
    return (complex(math.fsum(v.real for v in reversed(s_an)),
                    math.fsum(v.imag for v in reversed(s_an))),
            complex(math.fsum(v.real for v in reversed(s_pw)),
                    math.fsum(v.imag for v in reversed(s_pw))))


def compute_R(alpha: float, gamma: float, rho, target_tol: float,
              n_cap: int = _N_CAP, moments=None) -> RCertificate:
    """Certified estimate of R e^{i theta} = I(gamma (1 - rho)).

    rho must be a verified theta-root with Re rho in (1/2, 1), so that
    Re a = gamma (1 - Re rho) lies in (0, gamma/2).  ``moments`` may inject
    precomputed (E Stilde^a, E Stilde, E Stilde^{Re a}, quad_err) tuples
    (used by tests for degenerate cases); by default they are computed by
    adaptive quadrature with tolerance tied to the truncation bound.
    """
    rho = complex(rho)
    if not (0.5 < rho.real < 1.0):
        raise DomainError("need Re rho in (1/2, 1)")
    if not target_tol > 0:
        raise DomainError("target_tol must be positive")
    a = gamma * (1.0 - rho)
    rea = a.real
    fa = f_bound(a)

    if moments is None:
        # cheap first pass for the real moment fixes N; the complex moment
        # is then computed to a tolerance that keeps quadrature subdominant
        es_rea, _ = s_tilde_moment(alpha, gamma, rea, tol=1e-12)
        es_rea = abs(es_rea)
    else:
        es_rea = abs(moments[2])
    bound_const = es_rea * fa / (1.0 + rea)
    n_needed = max(3, int(math.ceil((bound_const / target_tol) ** (1.0 / (1.0 + rea)))))
    if n_needed > n_cap:
        raise ToleranceError(
            f"truncation bound needs N={n_needed} > cap {n_cap} for tol {target_tol:g}")
    error_bound = bound_const * n_needed ** (-(1.0 + rea))

    sum_an, sum_pw = _partial_sums(a, n_needed)
    zeta_val = complex_zeta(1.0 + a)
    series = sum_an + 0.5 * zeta_val - 0.5 * sum_pw
    a0 = 1.0 / (1.0 - a)

    if moments is None:
        quad_tol = 0.1 * error_bound / (abs(series) + 2.0 * abs(a0) + 1.0)
        es_a, err_a = s_tilde_moment(alpha, gamma, a, tol=quad_tol)
        es_1, err_1 = s_tilde_moment(alpha, gamma, 1.0, tol=quad_tol)
        es_1 = es_1.real if isinstance(es_1, complex) else es_1
    else:
        es_a, es_1 = moments[0], moments[1]
        err_a = err_1 = moments[3] if len(moments) > 3 else 0.0

    estimate = es_a * series + a0 * (es_a - es_1)
    quad_err = float(abs(err_a) * (abs(series) + abs(a0)) + abs(a0) * abs(err_1))
    return RCertificate(
        alpha=float(alpha), gamma=float(gamma), rho=rho, a=a,
        estimate=complex(estimate), R=abs(estimate),
        phase=math.atan2(estimate.imag, estimate.real),
        N=n_needed, error_bound=float(error_bound), quadrature_error=quad_err)
