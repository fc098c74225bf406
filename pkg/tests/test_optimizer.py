import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratelink.errors import InvalidArgument
from ratelink.optimizer import (
    SWEEP_COLUMNS, alpha_prime_from_delta, asymptotic_point, log_edge_root, mu_hat, objective,
    optimal_point, scaling_factors, sigma_hat_sq, solve_delta_star, stationarity_residual,
    sweep_operating_points,
)
from ratelink.rng import exponentials
from ratelink.tblas import predicted_scaling

mp.mp.dps = 50


def mp_mu(d):
    d = mp.mpf(d)
    return 1 - d * mp.e**-d / (1 - mp.e**-d)


def mp_sigma(d):
    d = mp.mpf(d)
    return 1 - d**2 * mp.e**-d / (1 - mp.e**-d) ** 2


def test_truncated_moments_at_one():
    assert mu_hat(1.0) == pytest.approx(0.418023, abs=1e-6)
    assert sigma_hat_sq(1.0) == pytest.approx(0.079326, abs=1e-6)
    # conditional Exp(1) sample below 1
    e = exponentials(5, 0, np.arange(400_000), 0)
    e = e[e <= 1.0]
    assert e.mean() == pytest.approx(mu_hat(1.0), abs=3e-3)
    assert e.var() == pytest.approx(sigma_hat_sq(1.0), abs=2e-3)


def test_truncated_moments_limits():
    assert abs(mu_hat(50.0) - 1) < 1e-12 and abs(sigma_hat_sq(50.0) - 1) < 1e-12
    assert mu_hat(1000.0) == 1.0
    assert mu_hat(1e-6) == pytest.approx(5e-7, rel=1e-6)
    assert abs(mu_hat(1e-6) - float(mp_mu("1e-6"))) / float(mp_mu("1e-6")) < 1e-6


@given(st.floats(1e-8, 700.0))
def test_moments_match_high_precision(d):
    assert mu_hat(d) == pytest.approx(float(mp_mu(d)), rel=1e-9)
    assert sigma_hat_sq(d) == pytest.approx(float(mp_sigma(d)), rel=1e-6, abs=1e-18)
    assert 0 < mu_hat(d) <= 1 and 0 < sigma_hat_sq(d) <= 1


def test_moments_reject_nonpositive():
    for f in (mu_hat, sigma_hat_sq):
        with pytest.raises(InvalidArgument):
            f(0.0)


def test_log_edge_root_accuracy():
    for d in (1e-12, 1e-3, 0.5, 0.7, 2.0, 40.0, 800.0):
        want = float(mp.log(1 - mp.e ** -mp.mpf(d)))
        assert log_edge_root(d) == pytest.approx(want, rel=1e-13)


def test_objective_values():
    want = float(mp_mu(1) - mp.log(1 - mp.e**-1))
    assert objective(1.0, 1.0) == pytest.approx(want, rel=1e-14)
    assert objective(1.0, 1.0) == pytest.approx(0.876698, abs=1e-6)
    assert objective(1e-12, 2.0) > 25
    assert objective(60.0, 3.0) == pytest.approx(3.0, rel=1e-12)


def test_stationarity_residual_values():
    assert stationarity_residual(0.8, 1.0) == pytest.approx(
        math.e * (1 - math.exp(-0.8) - 0.8) + 0.8, rel=1e-14)
    assert stationarity_residual(0.8, 1.0) == pytest.approx(0.12225, abs=1e-4)
    # near the excluded root at zero the residual behaves like delta
    assert stationarity_residual(1e-9, 3.0) == pytest.approx(1e-9, rel=1e-7)
    d = 0.37
    lam = math.log(d / (d + math.exp(-d) - 1))
    assert abs(stationarity_residual(d, lam)) < 1e-14


def test_solve_examples():
    d8 = solve_delta_star(8.0)
    assert abs(d8 - 2 * math.exp(-8)) <= 10 * math.exp(-16)
    assert solve_delta_star(0.05) == pytest.approx(20.5, abs=0.5)
    assert solve_delta_star(1.0) == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(InvalidArgument):
        solve_delta_star(0.0)
    with pytest.raises(InvalidArgument):
        solve_delta_star(1.0, tol=1e-16)


@pytest.mark.parametrize("lam", [0.01, 0.3, 1.0, 3.0, 12.0])
def test_solution_minimises_objective_on_grid(lam):
    d = solve_delta_star(lam)
    g0 = math.expm1(lam)
    grid = np.geomspace(d / 10, d * 10, 10_000)
    best = objective(d, g0)
    assert best <= min(objective(x, g0) for x in grid) + 1e-12 * abs(best)


@given(st.floats(0.005, 25.0))
def test_root_properties(lam):
    pt = optimal_point(lam)
    assert abs(pt.residual) < 1e-10
    assert pt.gamma0 == math.expm1(lam)
    assert abs(alpha_prime_from_delta(pt.delta_star, pt.gamma0) - pt.alpha_prime_star) < 1e-10
    assert pt.kappa_star == pytest.approx(-pt.alpha_prime_star / log_edge_root(pt.delta_star),
                                          rel=1e-14)
    assert abs(pt.rbar - lam) <= 1e-8
    ap, mu, L = pt.alpha_prime_star, mu_hat(pt.delta_star), log_edge_root(pt.delta_star)
    assert -(1 - ap) * L / (ap * mu) == pytest.approx(pt.gamma0, rel=1e-8)
    assert pt.kappa_star < 1 / lam


def test_alpha_prime_examples():
    want = float(-mp.log(1 - mp.e**-1) / (mp_mu(1) - mp.log(1 - mp.e**-1)))
    assert alpha_prime_from_delta(1.0, 1.0) == pytest.approx(want, rel=1e-14)
    assert alpha_prime_from_delta(1.0, 1.0) == pytest.approx(0.523185, abs=1e-6)
    assert alpha_prime_from_delta(1.0, 1e-12) == pytest.approx(1.0, abs=1e-11)
    assert alpha_prime_from_delta(1.0, 1e12) < 1e-11


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
def test_scaling_round_trip(lam):
    pt = optimal_point(lam)
    kappa, tau, rbar = scaling_factors(pt.delta_star, pt.alpha_prime_star)
    assert rbar == pytest.approx(lam, abs=1e-8)
    assert tau == pytest.approx(kappa * rbar, rel=1e-14)


def test_large_delta_recovers_single_threshold_law():
    # with delta large the conflict graph is complete and Delta = (1 - alpha') log n
    # matches log n - log log n - log alpha when alpha = alpha' / -log(1 - e^-delta)
    d = 30.0
    L = log_edge_root(d)
    alpha = 0.7
    ap = -alpha * L
    kappa, tau, _ = scaling_factors(d, ap)
    k_t, tau_t, _ = predicted_scaling(alpha)
    assert kappa == pytest.approx(k_t, rel=1e-8)
    assert tau == pytest.approx(tau_t, rel=1e-6)


def test_kappa_band_at_five():
    assert abs(optimal_point(5.0).kappa_star - 0.2) <= 0.04


def test_asymptotic_points():
    big = asymptotic_point(10.0, "large")
    assert big.delta_star == pytest.approx(9.0800e-5, rel=1e-4)
    assert big.alpha_prime_star == pytest.approx(0.9)
    assert big.kappa_star == pytest.approx(0.1)
    assert big.tau_star == pytest.approx(0.96931, abs=1e-5)
    assert big.approximate
    assert big.residual == stationarity_residual(big.delta_star, 10.0)
    small = asymptotic_point(0.01, "small")
    assert small.delta_star == pytest.approx(100.5)
    assert small.kappa_star == pytest.approx(99.5)
    assert small.tau_star == pytest.approx(0.995)
    with pytest.raises(InvalidArgument):
        asymptotic_point(1.0, "medium")


def test_asymptotic_error_shrinks():
    errs = [abs(asymptotic_point(l, "large").delta_star - solve_delta_star(l)) for l in (4, 6, 8, 10)]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    errs = [abs(asymptotic_point(l, "small").delta_star - solve_delta_star(l))
            for l in (0.1, 0.05, 0.01, 0.002)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_sweep_rows():
    grid = np.linspace(0.05, 20, 60)
    rows = sweep_operating_points(grid)
    assert [tuple(r) for r in rows] == [SWEEP_COLUMNS] * 60
    for r in rows:
        assert r["kappa_dtblas"] <= r["kappa_upper"]
        assert r["kappa_dtblas"] >= r["kappa_tblas"] - 1e-9
    # both strategies tend to full throughput as lambda -> 0, so the
    # DTBLAS curve dips before rising toward 1; check the rise for lambda >= 1
    tau_d = np.array([r["tau_dtblas"] for r in rows if r["lambda"] >= 1])
    assert np.all(np.diff(tau_d) > 0) and tau_d[-1] < 1
    assert rows[0]["tau_dtblas"] == pytest.approx(rows[0]["tau_tblas"], abs=0.03)
    big = [r["tau_tblas"] for r in rows if r["lambda"] >= 1]
    assert np.all(np.diff(big) < 0)
    with pytest.raises(InvalidArgument):
        sweep_operating_points([1.0, -1.0])


def test_tiny_lambda_rejected_cleanly():
    # alpha' = delta e^-delta underflows to zero once delta exceeds about 745
    with pytest.raises(InvalidArgument):
        optimal_point(1e-3)
