import math
import warnings
from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratelink.clique import Graph
from ratelink.errors import InvalidArgument, SizeCapError
from ratelink.random_graph import (
    CliqueWindow, GnpSpec, clique_window_fixed_p, clique_window_vanishing_p,
    count_cliques_exhaustive, expected_clique_count, gen_gnp, overlap_exponent, variance_ratio,
    vanishing_p_s,
)


def test_gnp_basics():
    g = gen_gnp(GnpSpec(1, 0.5, 0))
    assert g.m == 1 and g.num_edges == 0
    a, b = gen_gnp(GnpSpec(40, 0.3, 9)), gen_gnp(GnpSpec(40, 0.3, 9))
    assert a.edges() == b.edges()
    with pytest.raises(InvalidArgument):
        GnpSpec(5, 1.0)
    with pytest.raises(InvalidArgument):
        GnpSpec(5, 0.0)


@pytest.mark.parametrize("p", [0.999, 0.7, 0.2])
def test_gnp_edge_count_binomial(p):
    counts = np.array([gen_gnp(GnpSpec(5, p, s)).num_edges for s in range(3000)])
    se = math.sqrt(10 * p * (1 - p) / counts.size)
    assert abs(counts.mean() - 10 * p) <= 4 * se
    assert counts.max() <= 10


def test_fixed_p_example_product_reading():
    w = clique_window_fixed_p(200, 0.5, 0.2, reading="product")
    assert w.center == pytest.approx(13.30, abs=0.01)
    assert (w.lower, w.upper) == (12, 13)
    assert w.regime == "fixed_p" and 12 in w and 14 not in w


def test_fixed_p_nested_reading():
    w = clique_window_fixed_p(200, 0.5, 0.2)
    lb = math.log(2)
    by_hand = (2 * math.log(200) / lb - 2 * math.log(math.log(100) / lb) / lb
               + 2 * math.log(math.e / 2) / lb + 1)
    assert w.center == pytest.approx(by_hand, rel=1e-14)
    assert (w.lower, w.upper) == (11, 12)


def test_fixed_p_domain():
    with pytest.raises(InvalidArgument):
        clique_window_fixed_p(2, 0.5, 0.1)
    with pytest.raises(InvalidArgument):
        clique_window_fixed_p(200, 0.5, 0.1, reading="other")
    with pytest.raises(InvalidArgument):
        clique_window_fixed_p(200, 0.5, 0.0)


@given(st.integers(50, 10**6), st.floats(0.05, 0.9), st.floats(0.01, 1.0), st.floats(0.0, 1.0))
def test_fixed_p_widens_with_epsilon(m, p, eps, extra):
    a = clique_window_fixed_p(m, p, eps)
    b = clique_window_fixed_p(m, p, eps + extra)
    assert b.lower <= a.lower <= a.upper <= b.upper


def test_fixed_p_shifts_up_with_p():
    centres = [clique_window_fixed_p(500, p, 0.1).center for p in np.linspace(0.1, 0.9, 17)]
    assert np.all(np.diff(centres) > 0)


def test_vanishing_p_example():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = clique_window_vanishing_p(10**6, 0.01, 0.1)
    assert w.center == pytest.approx(5.90, abs=5e-3)
    assert (w.lower, w.upper) == (5, 6) and w.regime == "vanishing_p"


def test_vanishing_p_warnings():
    with pytest.warns(UserWarning, match="not small"):
        clique_window_vanishing_p(10**4, 0.3, 0.1)
    with pytest.warns(UserWarning, match="decays fast"):
        clique_window_vanishing_p(2000, 0.05, 0.1)


@given(st.integers(200, 10**7), st.floats(0.001, 0.2), st.floats(0.0, 2.0))
def test_vanishing_p_monotone_in_epsilon(m, p, eps):
    if math.log(m) / -math.log(p) <= 1.0:
        return
    assert vanishing_p_s(m, p, eps) <= vanishing_p_s(m, p, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w = clique_window_vanishing_p(m, p, eps)
    assert w.upper == w.lower + 1


@pytest.mark.parametrize("p", [0.01, 0.05, 0.1])
def test_vanishing_p_doubling_m(p):
    for m in (10**4, 10**5, 10**6):
        shift = vanishing_p_s(2 * m, p, 0.1) - vanishing_p_s(m, p, 0.1)
        assert shift > 0
        assert shift == pytest.approx(2 * math.log(2) / -math.log(p), rel=0.2)


def test_expected_counts():
    assert expected_clique_count(30, 0.3, 0) == pytest.approx(1.0)
    assert expected_clique_count(30, 0.3, 1) == pytest.approx(30.0)
    assert expected_clique_count(30, 0.3, 3) == pytest.approx(4060 * 0.3**3, rel=1e-12)
    assert expected_clique_count(30, 0.3, 3) == pytest.approx(109.62, abs=1e-9)
    assert expected_clique_count(30, 0.3, 4) == pytest.approx(27405 * 0.3**6, rel=1e-12)
    assert expected_clique_count(30, 0.3, 4) == pytest.approx(19.978, abs=1e-3)
    assert expected_clique_count(10**6, 0.01, 50) == 0.0  # underflows gracefully
    with pytest.raises(InvalidArgument):
        expected_clique_count(5, 0.5, 6)


def exact_variance_ratio(m, p, s):
    """Var(Y_s)/E(Y_s)^2 by summing over every ordered pair of s-subsets."""
    sets = [frozenset(c) for c in combinations(range(m), s)]
    pairs = s * (s - 1) // 2
    mean = len(sets) * p**pairs
    second = 0.0
    for a in sets:
        for b in sets:
            shared = len(a & b)
            second += p ** (2 * pairs - shared * (shared - 1) // 2)
    return (second - mean**2) / mean**2


@pytest.mark.parametrize("m,p,s", [(7, 0.3, 3), (8, 0.5, 3), (8, 0.4, 4), (6, 0.2, 2)])
def test_variance_ratio_matches_pair_sum(m, p, s):
    assert variance_ratio(m, p, s) == pytest.approx(exact_variance_ratio(m, p, s), rel=1e-10)


def test_variance_ratio_s2_closed_form():
    for m, p in ((10, 0.3), (50, 0.7)):
        assert variance_ratio(m, p, 2) == pytest.approx((1 / p - 1) / math.comb(m, 2), rel=1e-12)


def test_variance_ratio_decays_with_m():
    vals = [variance_ratio(m, 0.3, 4) for m in (50, 100, 200, 400)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@given(st.integers(3, 40), st.integers(100, 10**6), st.floats(0.01, 0.9))
def test_overlap_exponent_convex(s, m, p):
    ell = np.arange(2, s + 1)
    g = overlap_exponent(ell, s, m, p)
    assert np.all(np.diff(g, 2) >= -1e-9)


def test_count_cliques_simple_graphs():
    k6 = Graph(np.arange(6), ~np.eye(6, dtype=bool))
    assert count_cliques_exhaustive(k6, 3) == 20
    assert count_cliques_exhaustive(k6, 7) == 0
    empty = Graph(np.arange(6), np.zeros((6, 6), dtype=bool))
    assert count_cliques_exhaustive(empty, 2) == 0
    tri = Graph.from_edges([0, 1, 2, 3], [(0, 1), (1, 2), (0, 2)])
    assert count_cliques_exhaustive(tri, 3) == 1
    with pytest.raises(SizeCapError):
        count_cliques_exhaustive(k6, 3, budget=10)


@pytest.mark.parametrize("seed", range(5))
def test_count_cliques_matches_networkx(seed):
    g = gen_gnp(GnpSpec(25, 0.4, seed))
    sizes = [len(c) for c in nx.enumerate_all_cliques(g.to_networkx())]
    for s in (2, 3, 4):
        assert count_cliques_exhaustive(g, s) == sizes.count(s)


def test_window_containment_operator():
    w = CliqueWindow(3, 4, "vanishing_p", 0.1, 3.5)
    assert 3 in w and 4 in w and 5 not in w
