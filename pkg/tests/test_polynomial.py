"""Root-finder contracts: spec examples, backend cross-checks,
reconstruction invariants."""

import math

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from cantorspec.errors import DomainError
from cantorspec.numerics import (LogPolynomial, Polynomial, aberth_roots,
                                 companion_roots, poly_roots)

SQRT71_HALF = 4.213074886588179  # sqrt(71)/2, 40-digit value rounded


def roots_of(p):
    return np.array([r for r, m in poly_roots(p) for _ in range(m)])


def match_distance(a, b):
    """Max pairwise distance under the optimal assignment."""
    a = np.asarray(a)
    b = np.asarray(b)
    cost = np.abs(a[:, None] - b[None, :])
    ri, ci = linear_sum_assignment(cost)
    return float(cost[ri, ci].max())


def test_quadratic_example():
    # the n=2, alpha=2 characteristic polynomial
    p = Polynomial(np.array([-6.0, 5.0, 1.0], dtype=complex))
    assert match_distance(roots_of(p), [1.0, -6.0]) <= 1e-10


def test_pure_imaginary_pair():
    p = Polynomial(np.array([1.0, 0.0, 1.0], dtype=complex))
    assert match_distance(roots_of(p), [1j, -1j]) <= 1e-12


def test_alpha3_cubic_closed_form():
    # (theta+3)(theta+4)(theta+5) - 120; closed form gives the root pair
    # -(3*3+4)/2 +- sqrt(-(3*9+36+8))/2 = -6.5 +- i sqrt(71)/2 and theta=1
    coeffs = np.polynomial.polynomial.polyfromroots([-3.0, -4.0, -5.0])
    coeffs[0] -= 120.0
    p = Polynomial(coeffs.astype(complex))
    expected = [1.0, complex(-6.5, SQRT71_HALF), complex(-6.5, -SQRT71_HALF)]
    assert match_distance(roots_of(p), expected) <= 1e-10


def test_backends_cross_check_random():
    rng = np.random.default_rng(20240811)
    for trial in range(25):
        deg = int(rng.integers(2, 14))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        coeffs[-1] += 2.0  # keep the leading coefficient well away from 0
        p = Polynomial(coeffs)
        a = aberth_roots(p)
        c = companion_roots(p)
        assert match_distance(a, c) <= 1e-8 * (1.0 + np.abs(a).max())


def test_reconstruction_from_roots():
    rng = np.random.default_rng(7)
    for trial in range(10):
        deg = int(rng.integers(2, 10))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        coeffs[-1] += 2.0
        p = Polynomial(coeffs)
        roots = roots_of(p)
        monic = np.polynomial.polynomial.polyfromroots(roots)
        target = p.coefficients / p.coefficients[-1]
        assert np.max(np.abs(monic - target)) <= 1e-7 * np.max(np.abs(target))


def test_zero_roots_are_stripped():
    # theta^2 (theta - 2)
    p = Polynomial(np.array([0.0, 0.0, -2.0, 1.0], dtype=complex))
    got = sorted(roots_of(p), key=lambda z: z.real)
    assert abs(got[0]) <= 1e-12 and abs(got[1]) <= 1e-12
    assert abs(got[2] - 2.0) <= 1e-12


def test_degree_validation():
    with pytest.raises(DomainError):
        poly_roots(Polynomial(np.array([3.0], dtype=complex)))
    with pytest.raises(DomainError):
        Polynomial(np.array([1.0, 0.0], dtype=complex))


def _charpoly_sym(alpha: int):
    d = LogPolynomial.from_positive_linear_factors([float(alpha + i) for i in range(alpha)])
    const = LogPolynomial.one().scaled(
        math.log(2.0) + math.lgamma(2.0 * alpha) - math.lgamma(alpha))
    return d.subtract(const)


@pytest.mark.parametrize("alpha", [2, 5, 10, 20, 40, 60, 80])
def test_characteristic_polynomials_bidirectional(alpha):
    """Both backends on the balanced factorial-coefficient polynomials.

    These are Wilkinson-class: the deep-left roots are only determined to
    the roundoff floor of the expanded monomial basis, so the cross-check
    is relative to the root scale there; the well-conditioned roots that
    the analysis actually consumes (theta = 1 and the rightmost pair) must
    agree to near machine accuracy."""
    logpoly = _charpoly_sym(alpha)
    float_poly, log_scale = logpoly.to_polynomial()
    scale = math.exp(log_scale)
    mine = np.array([r * scale for r, m in poly_roots(float_poly) for _ in range(m)])
    comp = companion_roots(float_poly) * scale
    assert len(mine) == alpha == len(comp)
    root_scale = np.abs(mine).max()
    rel_tol = {2: 1e-13, 5: 1e-12, 10: 1e-10, 20: 1e-6}.get(alpha, 0.05)
    assert match_distance(mine, comp) <= rel_tol * root_scale
    assert min(abs(mine - 1.0)) <= 1e-7
    if alpha >= 10:
        top_mine = mine[np.argmax(mine.real - (np.abs(mine - 1.0) < 1e-6) * 1e9)]
        cand = comp[np.abs(comp - top_mine) < 1e-5]
        assert cand.size >= 1  # rightmost nontrivial root agrees across backends


def test_log_polynomial_exactness_small_case():
    # (x+1)(x+2) = 2 + 3x + x^2, then subtract the constant 4
    d = LogPolynomial.from_positive_linear_factors([1.0, 2.0])
    n = d.subtract(LogPolynomial.one().scaled(math.log(4.0)))
    poly, log_scale = n.to_polynomial()
    coeffs = poly.coefficients * np.exp(-np.arange(3) * log_scale)
    coeffs /= coeffs[-1]
    assert np.allclose(coeffs.real, [-2.0, 3.0, 1.0], atol=1e-14)
