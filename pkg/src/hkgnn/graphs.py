"""Undirected graphs and the normalized operators every other module consumes.

Graphs are immutable once built. Normalization follows the self-loop
convention: degrees are row sums of A + I, so the normalized adjacency is
D^{-1/2} (A + I) D^{-1/2} and the normalized Laplacian is I minus that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "build_graph",
    "adjacency_matrix",
    "normalized_adjacency",
    "normalized_laplacian",
    "homophily_level",
]


class GraphError(ValueError):
    """Raised for invalid graph construction input."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with optional node labels.

    Edges are stored canonically as (min, max) pairs with no self-loops;
    normalization adds the identity explicitly, so input self-loops are
    rejected rather than merged.
    """

    n_nodes: int
    edges: frozenset[tuple[int, int]]
    labels: np.ndarray | None = None
    k_components: int = 1

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Plain degrees (without the implicit self loop)."""
        d = np.zeros(self.n_nodes)
        for i, j in self.edges:
            d[i] += 1.0
            d[j] += 1.0
        return d


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def build_graph(n: int, edges, labels=None) -> Graph:
    """Build a Graph from an edge list, deduplicating symmetric pairs.

    Raises GraphError for out-of-range endpoints or self-loops.
    """
    if n < 1:
        raise GraphError(f"n_nodes must be positive, got {n}")
    canonical: set[tuple[int, int]] = set()
    uf = _UnionFind(n)
    for edge in edges:
        i, j = int(edge[0]), int(edge[1])
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"edge ({i}, {j}) has an endpoint outside [0, {n})")
        if i == j:
            raise GraphError(f"self-loop ({i}, {i}) rejected; normalization adds I explicitly")
        canonical.add((min(i, j), max(i, j)))
        uf.union(i, j)
    k = len({uf.find(i) for i in range(n)})
    lab = None
    if labels is not None:
        lab = np.asarray(labels, dtype=int)
        if lab.shape != (n,):
            raise GraphError(f"labels must have shape ({n},), got {lab.shape}")
    return Graph(n_nodes=n, edges=frozenset(canonical), labels=lab, k_components=k)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Dense 0/1 adjacency matrix (no self loops)."""
    a = np.zeros((g.n_nodes, g.n_nodes))
    for i, j in g.edges:
        a[i, j] = 1.0
        a[j, i] = 1.0
    return a


def normalized_adjacency(g: Graph) -> np.ndarray:
    """D^{-1/2} (A + I) D^{-1/2} with degrees taken as row sums of A + I.

    Symmetric by construction; spectrum lies in [-1, 1].
    """
    a = adjacency_matrix(g)
    np.fill_diagonal(a, 1.0)
    inv_sqrt = 1.0 / np.sqrt(a.sum(axis=1))
    return inv_sqrt[:, None] * a * inv_sqrt[None, :]


def normalized_laplacian(g: Graph) -> np.ndarray:
    """I minus the normalized adjacency; PSD with eigenvalues in [0, 2]."""
    return np.eye(g.n_nodes) - normalized_adjacency(g)


def homophily_level(g: Graph) -> float:
    """Edge homophily: fraction of edges joining same-label endpoints."""
    if g.labels is None:
        raise GraphError("homophily_level requires node labels")
    if not g.edges:
        raise GraphError("homophily_level is undefined for an edgeless graph")
    same = sum(1 for i, j in g.edges if g.labels[i] == g.labels[j])
    return same / len(g.edges)
