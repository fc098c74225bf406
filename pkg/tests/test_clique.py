from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratelink.clique import (
    Graph, _exact_positions, clique_number, max_clique_exact, max_clique_greedy, read_edge_list,
    write_edge_list,
)
from ratelink.errors import InvalidArgument, SizeCapError
from ratelink.random_graph import GnpSpec, gen_gnp


def brute_max_clique(graph):
    m = graph.m
    for k in range(m, 0, -1):
        for combo in combinations(range(m), k):
            if all(graph.adjacency[a, b] for a, b in combinations(combo, 2)):
                return [int(graph.labels[i]) for i in combo]
    return []


def test_complete_and_edgeless():
    k = Graph(np.arange(7), ~np.eye(7, dtype=bool))
    assert max_clique_exact(k) == list(range(7))
    assert max_clique_greedy(k) == list(range(7))
    empty = Graph(np.arange(5), np.zeros((5, 5), dtype=bool))
    assert len(max_clique_exact(empty)) == 1
    assert len(max_clique_greedy(empty)) == 1
    assert max_clique_exact(Graph(np.arange(0), np.zeros((0, 0), dtype=bool))) == []


def test_lexicographic_tie_break():
    g = Graph.from_edges([0, 1, 2], [(0, 1), (1, 2)])
    assert max_clique_exact(g) == [0, 1]


def test_cap():
    g = gen_gnp(GnpSpec(30, 0.5, 0))
    with pytest.raises(SizeCapError):
        max_clique_exact(g, cap=29)


@pytest.mark.parametrize("seed", range(20))
def test_exact_matches_networkx_at_m60(seed):
    g = gen_gnp(GnpSpec(60, 0.5, seed))
    ours = max_clique_exact(g)
    assert g.is_clique(ours)
    nxg = g.to_networkx()
    best = max(len(c) for c in nx.find_cliques(nxg))
    assert len(ours) == best
    # smallest in lexicographic order among all maximum cliques
    maxima = sorted(sorted(c) for c in nx.find_cliques(nxg) if len(c) == best)
    assert ours == maxima[0]


@given(st.integers(1, 13), st.floats(0.05, 0.95), st.integers(0, 2**32))
def test_exact_matches_enumeration(m, p, seed):
    g = gen_gnp(GnpSpec(m, p, seed))
    assert max_clique_exact(g) == brute_max_clique(g)


@given(st.integers(1, 40), st.floats(0.05, 0.95), st.integers(0, 2**32), st.integers(1, 6))
def test_greedy_is_maximal_and_bounded(m, p, seed, restarts):
    g = gen_gnp(GnpSpec(m, p, seed))
    c = max_clique_greedy(g, restarts, seed)
    assert g.is_clique(c)
    assert len(c) <= clique_number(g)
    pos = np.searchsorted(g.labels, c)
    common = np.all(g.adjacency[pos], axis=0)
    common[pos] = False
    assert not common.any()  # maximal
    assert c == max_clique_greedy(g, restarts, seed)


def test_greedy_never_beats_exact_on_100_instances():
    for seed in range(100):
        g = gen_gnp(GnpSpec(25, 0.4, seed))
        assert len(max_clique_greedy(g, 4, seed)) <= clique_number(g)


def test_floor_seed_does_not_change_answer():
    g = gen_gnp(GnpSpec(40, 0.5, 3))
    adj = g.bitsets()
    assert _exact_positions(adj, g.m, 0) == _exact_positions(adj, g.m, 5)


def test_labels_preserved():
    g = Graph.from_edges([4, 9, 11, 30], [(4, 11), (11, 30), (4, 30)])
    assert max_clique_exact(g) == [4, 11, 30]


def test_graph_validation():
    with pytest.raises(InvalidArgument):
        Graph(np.array([1, 0]), np.zeros((2, 2), dtype=bool))
    asym = np.zeros((2, 2), dtype=bool)
    asym[0, 1] = True
    with pytest.raises(InvalidArgument):
        Graph(np.arange(2), asym)


def test_edge_list_round_trip(tmp_path):
    g = Graph.from_edges([0, 2, 5, 8], [(0, 2), (2, 8)])
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    lines = path.read_text().splitlines()
    assert lines[1:] == ["1 3", "3 9"]
    back = read_edge_list(path)
    assert back.labels.tolist() == [0, 2, 5, 8]
    assert back.edges() == g.edges()
