"""Synthetic graphs with a homophily dial, plus dataset files and splits.

The generator is a contextual stochastic block model: balanced classes,
independent edges with within/between-class probabilities, and Gaussian
features around orthogonal class means. Everything is deterministic per seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fileio
from .graphs import Graph, build_graph

__all__ = [
    "CsbmParams",
    "Split",
    "csbm_generate",
    "make_split",
    "load_dataset",
    "save_dataset",
]


@dataclass(frozen=True)
class CsbmParams:
    n_nodes: int
    n_classes: int
    p_intra: float
    p_inter: float
    feature_dim: int
    signal: float
    noise_sd: float
    seed: int

    def __post_init__(self):
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")
        if self.n_nodes < self.n_classes:
            raise ValueError(f"n_nodes = {self.n_nodes} is below n_classes = {self.n_classes}")
        for name in ("p_intra", "p_inter"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.feature_dim < self.n_classes:
            raise ValueError("feature_dim must be >= n_classes for orthogonal class means")
        if self.signal < 0.0:
            raise ValueError("signal must be nonnegative")
        if self.noise_sd <= 0.0:
            raise ValueError("noise_sd must be positive")


def csbm_generate(params: CsbmParams):
    """Sample (graph, features, labels); identical params+seed give identical output."""
    rng = np.random.default_rng(params.seed)
    n, c = params.n_nodes, params.n_classes
    labels = rng.permutation(np.arange(n) % c)
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, params.p_intra, params.p_inter)
    draw = rng.random((n, n))
    iu, ju = np.triu_indices(n, k=1)
    keep = draw[iu, ju] < prob[iu, ju]
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    graph = build_graph(n, edges, labels=labels)
    basis, _ = np.linalg.qr(rng.standard_normal((params.feature_dim, c)))
    means = params.signal * basis.T  # row c = mean of class c
    features = means[labels] + rng.normal(0.0, params.noise_sd, size=(n, params.feature_dim))
    return graph, features, labels


@dataclass(frozen=True, eq=False)
class Split:
    """Disjoint train/val/test node-index sets over n nodes."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    n: int

    def __post_init__(self):
        parts = [set(self.train.tolist()), set(self.val.tolist()), set(self.test.tolist())]
        total = sum(len(p) for p in parts)
        if len(parts[0] | parts[1] | parts[2]) != total:
            raise ValueError("split sets must be disjoint")


def make_split(n: int, ratios, seed: int) -> Split:
    """Seeded shuffle then partition by floor(ratio * n) sizes."""
    if len(ratios) != 3:
        raise ValueError("ratios must be (train, val, test)")
    if sum(ratios) > 1.0 + 1e-12:
        raise ValueError(f"ratios sum to {sum(ratios):g} > 1")
    sizes = [int(r * n) for r in ratios]
    if any(s < 1 for s in sizes):
        raise ValueError(f"empty partition from ratios {tuple(ratios)} at n = {n}")
    order = np.random.default_rng(seed).permutation(n)
    train = np.sort(order[:sizes[0]])
    val = np.sort(order[sizes[0]:sizes[0] + sizes[1]])
    test = np.sort(order[sizes[0] + sizes[1]:sizes[0] + sizes[1] + sizes[2]])
    return Split(train=train, val=val, test=test, n=n)


def load_dataset(edge_path, feature_path, label_path):
    """Read dataset files; node count comes from the label file."""
    labels = fileio.read_label_file(label_path)
    features = fileio.read_feature_file(feature_path)
    n = labels.shape[0]
    if features.shape[0] != n:
        raise ValueError(f"feature rows ({features.shape[0]}) do not match "
                         f"label count ({n})")
    edges = fileio.read_edge_file(edge_path)
    graph = build_graph(n, edges, labels=labels)
    return graph, features, labels


def save_dataset(directory, graph: Graph, features, labels):
    """Write edges.txt, features.csv, labels.txt; returns the three paths."""
    d = fileio.ensure_dir(directory)
    edge_path = d / "edges.txt"
    feature_path = d / "features.csv"
    label_path = d / "labels.txt"
    fileio.write_edge_file(edge_path, graph.edges)
    fileio.write_feature_file(feature_path, features)
    fileio.write_label_file(label_path, labels)
    return edge_path, feature_path, label_path
