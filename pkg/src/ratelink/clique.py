"""Undirected graphs on link labels and maximum-clique solvers.

The exact solver is a branch and bound over vertices in increasing label
order.  The bound at each node comes from a sequential greedy colouring of
the candidate set taken in *decreasing* order, so the colour count of every
suffix ``{u >= v}`` is available and pruning can stop the scan early.  Because
branches are explored in lexicographic order and only strict improvements
are kept, the first maximum clique found is the lexicographically smallest.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgument, SizeCapError

DEFAULT_EXACT_CAP = 400


@dataclass(frozen=True, eq=False)
class Graph:
    """Vertices ``labels`` (sorted, 0-based link ids) with a boolean adjacency matrix."""

    labels: np.ndarray
    adjacency: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.shape != (labels.size, labels.size):
            raise InvalidArgument("adjacency shape does not match the vertex count")
        if labels.size > 1 and np.any(np.diff(labels) <= 0):
            raise InvalidArgument("vertex labels must be strictly increasing")
        if not np.array_equal(adj, adj.T):
            raise InvalidArgument("adjacency must be symmetric")
        adj = adj.copy()
        np.fill_diagonal(adj, False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "adjacency", adj)

    @property
    def m(self) -> int:
        return int(self.labels.size)

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        a, b = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(self.labels[i]), int(self.labels[j])) for i, j in zip(a, b)]

    def is_clique(self, vertices) -> bool:
        pos = np.searchsorted(self.labels, np.asarray(list(vertices), dtype=np.int64))
        sub = self.adjacency[np.ix_(pos, pos)]
        return bool(np.all(sub | np.eye(len(pos), dtype=bool)))

    def bitsets(self) -> list[int]:
        """Row ``i`` of the adjacency as a Python int bitset over positions."""
        weights = [1 << k for k in range(self.m)]
        out = []
        for row in self.adjacency:
            bits = 0
            for k in np.flatnonzero(row):
                bits |= weights[k]
            out.append(bits)
        return out

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(int(v) for v in self.labels)
        g.add_edges_from(self.edges())
        return g

    @classmethod
    def from_edges(cls, labels, edges) -> "Graph":
        labels = np.unique(np.asarray(list(labels), dtype=np.int64))
        pos = {int(v): k for k, v in enumerate(labels)}
        adj = np.zeros((labels.size, labels.size), dtype=bool)
        for i, j in edges:
            a, b = pos[int(i)], pos[int(j)]
            adj[a, b] = adj[b, a] = True
        return cls(labels, adj)


def write_edge_list(graph: Graph, path: str | Path) -> None:
    """One ``i j`` pair per line with 1-based labels; a leading comment lists all vertices."""
    lines = ["# vertices " + " ".join(str(int(v) + 1) for v in graph.labels)]
    lines += [f"{i + 1} {j + 1}" for i, j in graph.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> Graph:
    labels: set[int] = set()
    edges = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "vertices":
                labels.update(int(v) - 1 for v in parts[1:])
            continue
        i, j = (int(t) - 1 for t in line.split()[:2])
        labels.update((i, j))
        edges.append((i, j))
    return Graph.from_edges(sorted(labels), edges)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _suffix_colour_bounds(verts: list[int], adj: list[int]) -> list[int]:
    # bounds[k] = colours needed by a greedy colouring of verts[k:]
    classes: list[int] = []
    bounds = [0] * len(verts)
    for k in range(len(verts) - 1, -1, -1):
        v = verts[k]
        nb = adj[v]
        for c, cls in enumerate(classes):
            if not cls & nb:
                classes[c] = cls | (1 << v)
                break
        else:
            classes.append(1 << v)
        bounds[k] = len(classes)
    return bounds


def _exact_positions(adj: list[int], m: int, floor: int = 0) -> list[int]:
    """Lexicographically smallest maximum clique, as sorted positions.

    ``floor`` is a size known to be attainable; cliques of that size are still
    recorded, so the tie-break is unaffected.
    """
    best: list[int] = []
    best_size = max(floor, 1) - 1
    clique: list[int] = []

    def expand(cand: int) -> None:
        nonlocal best, best_size
        if len(clique) > best_size:
            best, best_size = clique.copy(), len(clique)
        if not cand:
            return
        verts = _bits(cand)
        bounds = _suffix_colour_bounds(verts, adj)
        for k, v in enumerate(verts):
            if len(clique) + bounds[k] <= best_size:
                return
            clique.append(v)
            expand((cand >> (v + 1) << (v + 1)) & adj[v])
            clique.pop()

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, m + 100))
    try:
        expand((1 << m) - 1)
    finally:
        sys.setrecursionlimit(limit)
    return best


def max_clique_exact(graph: Graph, cap: int = DEFAULT_EXACT_CAP) -> list[int]:
    """A maximum clique (sorted labels); the lexicographically smallest among ties."""
    if graph.m > cap:
        raise SizeCapError(
            f"{graph.m} vertices exceed the exact-solver cap of {cap}; "
            "raise the cap or use max_clique_greedy"
        )
    if graph.m == 0:
        return []
    floor = len(max_clique_greedy(graph, restarts=1))
    pos = _exact_positions(graph.bitsets(), graph.m, floor)
    return [int(graph.labels[k]) for k in pos]


def clique_number(graph: Graph, cap: int = DEFAULT_EXACT_CAP) -> int:
    return len(max_clique_exact(graph, cap))


def _greedy_from(adj: np.ndarray, start: int | None) -> list[int]:
    cand = np.ones(adj.shape[0], dtype=bool)
    clique = []
    if start is not None:
        clique.append(start)
        cand &= adj[start]
    while cand.any():
        idx = np.flatnonzero(cand)
        deg = adj[np.ix_(idx, idx)].sum(axis=1)
        v = int(idx[np.argmax(deg)])  # argmax takes the lowest index on ties
        clique.append(v)
        cand &= adj[v]
    return sorted(clique)


def max_clique_greedy(graph: Graph, restarts: int = 8, seed: int = 0) -> list[int]:
    """A maximal clique from degree-greedy growth, best of ``restarts`` starts.

    The first start grows from the empty set; later starts are seeded with a
    random vertex drawn from ``numpy.random.default_rng(seed)``.
    """
    if restarts < 1:
        raise InvalidArgument("restarts must be >= 1")
    if graph.m == 0:
        return []
    rng = np.random.default_rng(seed)
    starts = [None] + list(rng.choice(graph.m, size=min(restarts - 1, graph.m), replace=False))
    best: list[int] = []
    for s in starts:
        c = _greedy_from(graph.adjacency, None if s is None else int(s))
        if len(c) > len(best) or (len(c) == len(best) and c < best):
            best = c
    return [int(graph.labels[k]) for k in best]
