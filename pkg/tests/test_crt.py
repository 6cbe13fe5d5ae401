"""Tree-skeleton identities: the rational psi, unit renewal mean, the
entropy moment, and the always-one martingale."""

import pytest

from cantorspec.crt import (crt_martingale_check, crt_report, crt_weight_spec,
                            entropy_moment, psi_crt)
from cantorspec.errors import DomainError
from cantorspec.renewal import Regime, moments, psi, spectral_roots


def test_spec_constants():
    spec = crt_weight_spec()
    assert spec.alphas == (0.5, 0.5, 0.5)
    assert spec.n == 3
    assert abs(spec.gamma - 2.0 / 3.0) <= 1e-15


def test_psi_closed_form_points():
    assert abs(psi_crt(1.0) - 1.0) <= 1e-15
    assert abs(psi_crt(1.5) - 0.75) <= 1e-15
    assert abs(psi_crt(2.0) - 0.6) <= 1e-15
    assert abs(psi_crt(2.5) - 0.5) <= 1e-15
    with pytest.raises(DomainError):
        psi_crt(-0.5)


def test_geometric_convergence_constants_below_one():
    for x in (1.5, 2.0, 2.5):
        assert psi_crt(x) < 1.0


def test_psi_matches_generic_on_grid():
    spec = crt_weight_spec()
    x = 0.0
    while x <= 5.0:
        assert abs(psi_crt(x) - psi(spec, x)) <= 1e-12
        x += 0.25


def test_unit_renewal_mean():
    mu1, _ = moments(crt_weight_spec())
    assert abs(mu1 - 1.0) <= 1e-12


def test_no_slow_roots():
    # psi = 3/(1+2 theta) is injective: theta = 1 is the only solution
    sp = spectral_roots(crt_weight_spec())
    assert all(r.real < 0 for r, _ in sp.theta_roots)
    assert sp.regime is Regime.CLT


def test_entropy_moment():
    # E X ln X = -2/9 for X ~ Beta(1/2, 1), so the three-part sum is 2/3
    mean, half = entropy_moment(100_000, 2024)
    assert abs(mean - 2.0 / 3.0) <= half
    # CI shrinks like 1/sqrt(replicates)
    _, half4 = entropy_moment(400_000, 2024)
    assert half4 <= 0.6 * half
    with pytest.raises(DomainError):
        entropy_moment(10, 1)


def test_martingale_check():
    assert crt_martingale_check(6.0, 200, 31) <= 1e-9
    assert crt_martingale_check(0.0, 10, 32) <= 1e-12


def test_first_generation_births_positive():
    from cantorspec.gbp import grow_cut_set, replicate_rng
    cs = grow_cut_set(crt_weight_spec(), 0.0, replicate_rng(33, 0))
    assert (cs.sigmas > 0).all()


def test_report_shape():
    rep = crt_report(t=4.0, replicates=50, entropy_replicates=2000,
                     master_seed=77)
    assert set(rep) == {"psi_checks", "mu1", "entropy_moment",
                        "martingale_max_dev"}
    assert max(c["abs_diff"] for c in rep["psi_checks"]) <= 1e-12
