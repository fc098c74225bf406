import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratelink.dtblas import DtblasParams, dtblas_select
from ratelink.errors import EmptySetError, InvalidArgument, RegimeError
from ratelink.model import annotate, from_gains, generate_network
from ratelink.noise_limited import (
    NoiseLimitedParams, delta0_threshold, interference_deviation, nl_select,
    nl_throughput_window, predicted_active_nl, solve_delta_nl,
)
from ratelink.tblas import tblas_select


def test_delta0_examples():
    assert delta0_threshold(1.0, 10.0, 2.0) == pytest.approx(2.1, rel=1e-15)
    assert delta0_threshold(3.0, math.inf, 0.5) == 1.5
    assert delta0_threshold(1.7, 1.0, 0.0) == 1.7
    with pytest.raises(InvalidArgument):
        delta0_threshold(0.0, 1.0, 1.0)


def test_solve_delta_example():
    sol = solve_delta_nl(10**6, 1.0)
    L, LL = math.log(1e6), math.log(math.log(1e6))
    target = 2 / (L - LL)
    assert target == pytest.approx(0.178736, abs=1e-6)
    assert abs(sol.delta / -math.log(sol.delta) - target) < 1e-12
    assert abs(sol.residual) < 1e-12
    assert 0 < sol.delta < math.exp(-1)
    assert sol.leading == pytest.approx(2 * LL / L, rel=1e-14)
    assert sol.leading == pytest.approx(0.380, abs=1e-3)


@given(st.integers(16, 10**12), st.floats(1e-3, 1.0))
def test_delta_root_properties(n, beta):
    L = math.log(n)
    if 2 * beta / (L - math.log(L)) >= math.exp(-1):
        with pytest.raises(RegimeError):
            solve_delta_nl(n, beta)
        return
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = solve_delta_nl(n, beta)
        b = solve_delta_nl(n, beta / 2)
    assert abs(a.residual) < 1e-12 and 0 < a.delta < math.exp(-1)
    assert b.delta < a.delta
    assert a.leading == pytest.approx(2 * b.leading, rel=1e-12)


def test_delta_regime_errors_and_warnings():
    with pytest.warns(UserWarning), pytest.raises(RegimeError):
        solve_delta_nl(100, 5.0)
    with pytest.raises(InvalidArgument):
        solve_delta_nl(10, 1.0)
    with pytest.warns(UserWarning, match="log beta"):
        solve_delta_nl(10**6, 1e-3)


def test_predicted_active():
    assert predicted_active_nl(10**6) == 5
    assert predicted_active_nl(10**9) == 6
    ks = [predicted_active_nl(n) for n in np.unique(np.geomspace(16, 1e15, 300).astype(np.int64))]
    assert all(a <= b for a, b in zip(ks, ks[1:]))


def test_params_invariants():
    p = NoiseLimitedParams.build(10**6, 2.0, 10.0, 1.0)
    assert p.Delta0 == 1.0 * (0.1 + 2.0)
    assert p.predicted_k2 == 5 and p.lam == pytest.approx(math.log(2))
    assert p.dtblas == DtblasParams(p.Delta0, p.delta)


def test_throughput_window_example():
    lo, hi = nl_throughput_window(10**6, 2.1, 10.0, 2.0)
    assert lo == pytest.approx(5 * math.log(2), rel=1e-14)
    assert lo == pytest.approx(3.466, abs=1e-3)
    assert hi == pytest.approx(5 * math.log1p(3.1 / 2.1), rel=1e-14)
    assert hi == pytest.approx(4.5336, abs=1e-4)


@given(st.integers(16, 10**9), st.floats(0.01, 10), st.floats(0.1, 100), st.floats(0.01, 5))
def test_throughput_window_nonempty(n, d0, rho, beta):
    lo, hi = nl_throughput_window(n, d0, rho, beta)
    assert hi > lo >= 0


def test_single_active_link_deviation(three_link):
    res = dtblas_select(three_link, DtblasParams(2.5, 0.1))
    assert res.active.size == 1
    dev = interference_deviation(res, 0.7, n=10**6)
    assert dev.deviation == 0.7
    assert dev.bound == pytest.approx(0.7 * math.log(math.log(1e6)) / math.sqrt(math.log(1e6)))
    assert interference_deviation(res, 0.7).bound is None


def test_empty_set_deviation(three_link):
    res = dtblas_select(three_link, DtblasParams(10.0, 0.1))
    with pytest.raises(EmptySetError):
        interference_deviation(res, 1.0)


def test_large_delta_reduces_to_tblas():
    inst = generate_network(400, 10.0, 3)
    p = NoiseLimitedParams.build(10**6, 1.0, 10.0, 1.0)
    wide = DtblasParams(p.Delta0, 50.0)
    res = dtblas_select(inst, wide, "exact")
    assert list(res.active.links) == list(tblas_select(inst, p.Delta0).links)


@pytest.mark.parametrize("seed", range(4))
def test_rate_guarantee_and_snr_dependence(seed):
    n, beta, rho = 20_000, 1.0, 10.0
    p = NoiseLimitedParams.build(n, beta, rho, 1.0)
    inst = generate_network(n, rho, seed)
    res = nl_select(inst, p, restarts=2, seed=seed)
    act = res.active
    assert np.all(inst.direct[act.links] > p.Delta0)
    if act.size and act.interference.max() <= beta:
        assert np.all(act.rates >= p.lam)
    # a stronger SNR strictly raises every rate on the same set
    louder = annotate(inst.with_rho(2 * rho), act.links)
    assert np.all(louder.rates > act.rates)


def test_rate_guarantee_on_crafted_instance():
    g = np.array([[2.5, 0.1], [0.2, 2.4]])  # cross gains below delta_nl ~ 0.249
    inst = from_gains(g, 10.0)
    p = NoiseLimitedParams.build(10**6, 1.0, 10.0, 1.0)
    res = nl_select(inst, p, mode="exact")
    assert list(res.active.links) == [0, 1]
    assert res.active.interference.max() <= 1.0
    assert np.all(res.active.rates >= p.lam)
