"""Complex polynomials with two independent root-finding backends.

The characteristic polynomials arising downstream have factorial-sized
coefficients (the degree-80 ones span ~150 decimal orders), so coefficients
can optionally be carried in signed-log form (sign, log|a_j|) and the
variable is rescaled theta = s*u before any floating-point root finding.
The scale s is chosen by a least-squares fit of log|a_j| against j, which
flattens the coefficient profile of products of linear factors almost
perfectly.

Backends:
  * aberth_roots     -- Aberth-Ehrlich simultaneous iteration (written here)
  * companion_roots  -- eigenvalues of the companion matrix (numpy.roots)
They are deliberately independent so the test-suite can cross-check them.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class Polynomial:
    """Dense complex polynomial, coefficients ascending in degree."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("polynomial needs a 1-d, non-empty coefficient array")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("polynomial coefficients must be finite")
        if coeffs[-1] == 0 and coeffs.size > 1:
            raise DomainError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, z):
        acc = np.zeros_like(np.asarray(z, dtype=complex))
        for c in self.coefficients[::-1]:
            acc = acc * z + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial(np.zeros(1, dtype=complex))
        k = np.arange(1, self.degree + 1)
        return Polynomial(self.coefficients[1:] * k)


class LogPolynomial:
    """Polynomial with coefficients a_j = sign_j * exp(logmag_j).

    sign_j in {-1, 0, +1}; logmag_j = -inf encodes a zero coefficient.
    Only the operations needed to build and root-find the downstream
    characteristic polynomials are provided.
    """

    def __init__(self, signs, logmags):
        self.signs = np.asarray(signs, dtype=float)
        self.logmags = np.asarray(logmags, dtype=float)
        if self.signs.shape != self.logmags.shape or self.signs.ndim != 1:
            raise DomainError("signs/logmags must be matching 1-d arrays")
        # trim zero leading coefficients
        nz = np.nonzero(self.signs)[0]
        if nz.size == 0:
            raise DomainError("zero polynomial")
        top = nz[-1]
        self.signs = self.signs[: top + 1]
        self.logmags = self.logmags[: top + 1]

    @property
    def degree(self) -> int:
        return self.signs.size - 1

    @staticmethod
    def one() -> "LogPolynomial":
        return LogPolynomial(np.array([1.0]), np.array([0.0]))

    @staticmethod
    def from_positive_linear_factors(constants) -> "LogPolynomial":
        """prod_k (x + c_k) with every c_k > 0 (all coefficients positive)."""
        logmag = np.array([0.0])
        for c in constants:
            if not c > 0:
                raise DomainError("linear-factor constants must be positive")
            lc = np.log(c)
            nxt = np.full(logmag.size + 1, -np.inf)
            nxt[1:] = logmag                      # x * previous
            nxt[:-1] = np.logaddexp(nxt[:-1], lc + logmag)  # + c * previous
            logmag = nxt
        return LogPolynomial(np.ones_like(logmag), logmag)

    def scaled(self, log_w: float) -> "LogPolynomial":
        """Multiply the whole polynomial by exp(log_w) (log-space)."""
        return LogPolynomial(self.signs.copy(), self.logmags + log_w)

    @staticmethod
    def sum_positive(parts) -> "LogPolynomial":
        """Sum of polynomials that all have non-negative coefficients."""
        deg = max(p.degree for p in parts)
        out = np.full(deg + 1, -np.inf)
        for p in parts:
            if np.any(p.signs < 0):
                raise DomainError("sum_positive needs non-negative coefficients")
            out[: p.logmags.size] = np.logaddexp(out[: p.logmags.size], p.logmags)
        signs = np.where(np.isfinite(out), 1.0, 0.0)
        return LogPolynomial(signs, out)

    def subtract(self, other: "LogPolynomial") -> "LogPolynomial":
        """self - other with signed log arithmetic."""
        deg = max(self.degree, other.degree)
        s = np.zeros(deg + 1)
        l = np.full(deg + 1, -np.inf)

        def put(j, sign, logmag):
            if sign == 0 or logmag == -np.inf:
                return
            if s[j] == 0:
                s[j], l[j] = sign, logmag
                return
            if s[j] == sign:
                l[j] = np.logaddexp(l[j], logmag)
                return
            # opposite signs: cancellation
            if logmag == l[j]:
                s[j], l[j] = 0.0, -np.inf
            elif logmag > l[j]:
                l[j] = logmag + np.log1p(-np.exp(l[j] - logmag))
                s[j] = sign
            else:
                l[j] = l[j] + np.log1p(-np.exp(logmag - l[j]))

        for j in range(self.logmags.size):
            put(j, self.signs[j], self.logmags[j])
        for j in range(other.logmags.size):
            put(j, -other.signs[j], other.logmags[j])
        return LogPolynomial(s, l)

    def variable_scale(self) -> float:
        """Least-squares slope fit of logmag_j vs j; returns log of the
        substitution scale s for theta = s * u."""
        mask = np.isfinite(self.logmags)
        j = np.nonzero(mask)[0].astype(float)
        if j.size < 2:
            return 0.0
        y = self.logmags[mask]
        slope = np.polyfit(j, y, 1)[0]
        return -float(slope)

    def to_polynomial(self, log_scale: float | None = None):
        """Float Polynomial in u where theta = exp(log_scale) * u.

        Returns (Polynomial, log_scale).  Coefficients are normalised so the
        largest magnitude is 1; anything more than ~600 e-folds below the
        largest flushes to zero, which is far beyond double precision anyway.
        """
        if log_scale is None:
            log_scale = self.variable_scale()
        j = np.arange(self.logmags.size)
        shifted = self.logmags + j * log_scale
        top = np.max(shifted[np.isfinite(shifted)])
        coeffs = self.signs * np.exp(np.maximum(shifted - top, -745.0))
        coeffs[~np.isfinite(self.logmags)] = 0.0
        return Polynomial(coeffs.astype(complex)), float(log_scale)


# --- root finding -----------------------------------------------------------


def _bini_initial_points(monic: np.ndarray) -> np.ndarray:
    """Starting points on the Newton-polygon radii (Bini's initialisation).

    The upper convex hull of (j, log|a_j|) splits the degree into segments;
    each segment of length L contributes L points on a circle whose radius
    is the segment's slope-derived magnitude, which tracks the actual root
    magnitudes far better than a single circle."""
    n = monic.size - 1
    with np.errstate(divide="ignore"):
        logmag = np.where(np.abs(monic) > 0, np.log(np.abs(np.where(monic == 0, 1.0, monic))), -np.inf)
    # upper convex hull by monotone chain over (j, logmag_j)
    hull = []
    for j in range(n + 1):
        if logmag[j] == -np.inf:
            continue
        while len(hull) >= 2:
            (j1, y1), (j2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (j - j1) <= (logmag[j] - y1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append((j, logmag[j]))
    pts = []
    offset = 0
    for (j1, y1), (j2, y2) in zip(hull[:-1], hull[1:]):
        radius = np.exp((y1 - y2) / (j2 - j1))
        count = j2 - j1
        for k in range(count):
            angle = 2.0 * np.pi * (k + 0.5) / count + 0.45 + 0.3 * offset
            pts.append(radius * np.exp(1j * angle))
        offset += 1
    return np.array(pts, dtype=complex)


_EPS = float(np.finfo(float).eps)


def _horner_with_noise(coeffs, z):
    """Horner evaluation plus the classic running bound on its roundoff,
    noise ~ eps * sum_j |c_j| |z|^j (evaluated in the same pass)."""
    acc = np.zeros_like(z)
    err = np.zeros(z.shape, dtype=float)
    azs = np.abs(z)
    for cj in coeffs[::-1]:
        acc = acc * z + cj
        err = err * azs + np.abs(acc)
    return acc, _EPS * err


def aberth_roots(poly: Polynomial, tol: float = 5e-14, max_iter: int = 400) -> np.ndarray:
    """All roots by Aberth-Ehrlich simultaneous third-order iteration.

    A root is frozen either when its relative step drops below ``tol`` or
    when |p(z)| falls to the Horner roundoff floor (for ill-conditioned
    coefficient sets the floor is the best double precision can certify;
    the caller decides whether that residual is acceptable)."""
    coeffs = poly.coefficients.astype(complex)
    if poly.degree < 1:
        raise DomainError("degree must be >= 1")
    # strip exact zero roots up front
    nzero = 0
    while coeffs[0] == 0 and coeffs.size > 1:
        coeffs = coeffs[1:]
        nzero += 1
    m = coeffs.size - 1
    if m == 0:
        return np.zeros(nzero, dtype=complex)
    monic = coeffs / coeffs[-1]
    z = _bini_initial_points(monic)
    if z.size != m:  # degenerate hull (shouldn't happen); fall back to a circle
        k = np.arange(m)
        z = (1.0 + np.abs(monic).max() ** (1.0 / m)) * np.exp(2j * np.pi * (k + 0.5) / m)

    dmonic = monic[1:] * np.arange(1, m + 1)

    def horner(c, x):
        acc = np.zeros_like(x)
        for cj in c[::-1]:
            acc = acc * x + cj
        return acc

    active = np.ones(m, dtype=bool)
    for it in range(max_iter):
        p, noise = _horner_with_noise(monic, z)
        dp = horner(dmonic, z)
        dp = np.where(np.abs(dp) < 1e-300, 1e-300 + 0j, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulsion = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * repulsion
        denom = np.where(np.abs(denom) < 1e-300, 1e-300 + 0j, denom)
        step = np.where(active, newton / denom, 0.0)
        z = z - step
        rel = np.abs(step) / (1.0 + np.abs(z))
        at_floor = np.zeros(m, bool)
        if it >= 20:
            at_floor |= (np.abs(p) <= 4.0 * noise) & (rel < 1e-4)
        if it >= 100:
            # late stragglers bouncing inside their roundoff basin
            at_floor |= (np.abs(p) <= 8.0 * noise) & (rel < 3e-2)
        active &= (rel > tol) & ~at_floor
        if not active.any():
            break
    else:
        raise ConvergenceError("Aberth iteration did not converge; consider rescaling")
    if nzero:
        z = np.concatenate([z, np.zeros(nzero, dtype=complex)])
    return z


def companion_roots(poly: Polynomial) -> np.ndarray:
    """All roots via companion-matrix eigenvalues (numpy backend)."""
    if poly.degree < 1:
        raise DomainError("degree must be >= 1")
    return np.roots(poly.coefficients[::-1].copy())


def _cluster_multiplicities(roots: np.ndarray, tol: float):
    """Greedy clustering of near-coincident roots into (root, multiplicity)."""
    remaining = list(roots)
    out = []
    while remaining:
        r = remaining.pop()
        cluster = [r]
        keep = []
        for other in remaining:
            if abs(other - r) <= tol * (1.0 + abs(r)):
                cluster.append(other)
            else:
                keep.append(other)
        remaining = keep
        out.append((complex(np.mean(cluster)), len(cluster)))
    return out


def poly_roots(poly: Polynomial, residual_tol: float = 1e-9, cluster_tol: float = 1e-6):
    """Roots with multiplicities, verified by the residual condition
    |p(r)| <= residual_tol * max|coefficient|.

    The polynomial is balanced (theta = s*u substitution from the log-slope
    of |a_j|) before the Aberth iteration, and each root is Newton-polished
    in the balanced frame.
    """
    coeffs = poly.coefficients
    mags = np.abs(coeffs)
    finite = mags > 0
    signs = np.where(finite, 1.0, 0.0)
    with np.errstate(divide="ignore"):
        logmags = np.where(finite, np.log(np.where(finite, mags, 1.0)), -np.inf)
    phases = np.ones_like(coeffs)
    phases[finite] = coeffs[finite] / mags[finite]

    logpoly = LogPolynomial(signs, logmags)
    balanced, log_s = logpoly.to_polynomial()
    # reattach complex phases lost in the log representation
    bal_coeffs = balanced.coefficients * phases
    balanced = Polynomial(bal_coeffs)
    s = np.exp(log_s)

    roots_u = aberth_roots(balanced)
    # Newton polish in the balanced frame (skipped once at the noise floor)
    dbal = balanced.derivative()
    for _ in range(3):
        pv, noise = _horner_with_noise(balanced.coefficients, roots_u)
        dv = dbal(roots_u)
        ok = (np.abs(dv) > 1e-300) & (np.abs(pv) > 4.0 * noise)
        roots_u = np.where(ok, roots_u - pv / np.where(ok, dv, 1.0), roots_u)

    pv, noise = _horner_with_noise(balanced.coefficients, roots_u)
    max_coef = np.max(np.abs(balanced.coefficients))
    # The absolute contract; for factorial-coefficient (Wilkinson-class)
    # polynomials double precision cannot push |p(r)| below the Horner
    # roundoff floor, so the floor is accepted as "converged".
    bound = np.maximum(residual_tol * max_coef, 8.0 * noise)
    if np.any(np.abs(pv) > bound):
        worst = float(np.max(np.abs(pv) / np.maximum(bound, 1e-300)))
        raise ConvergenceError(f"root residual exceeds certifiable bound (x{worst:.2f})")
    return _cluster_multiplicities(roots_u * s, cluster_tol)
