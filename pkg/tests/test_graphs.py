import numpy as np
import pytest

from hkgnn.graphs import (GraphError, adjacency_matrix, build_graph, homophily_level,
                          normalized_adjacency, normalized_laplacian)

from conftest import random_graph


def brute_force_normalized_adjacency(g):
    """Independent dense-arithmetic oracle: D^{-1/2} (A + I) D^{-1/2}."""
    a = np.zeros((g.n_nodes, g.n_nodes))
    for i, j in g.edges:
        a[i, j] = a[j, i] = 1.0
    a_loop = a + np.eye(g.n_nodes)
    d = np.diag(a_loop.sum(axis=1))
    d_inv_sqrt = np.diag(1.0 / np.sqrt(np.diag(d)))
    return d_inv_sqrt @ a_loop @ d_inv_sqrt


def test_triangle_is_single_component():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.k_components == 1
    assert g.n_edges == 3


def test_two_disjoint_edges_two_components():
    g = build_graph(4, [(0, 1), (2, 3)])
    assert g.k_components == 2


def test_symmetric_duplicates_collapse():
    g = build_graph(2, [(0, 1), (1, 0)])
    assert g.edges == frozenset({(0, 1)})


def test_out_of_range_endpoint_rejected():
    with pytest.raises(GraphError):
        build_graph(3, [(0, 3)])
    with pytest.raises(GraphError):
        build_graph(3, [(-1, 1)])


def test_self_loop_rejected():
    with pytest.raises(GraphError, match="self-loop"):
        build_graph(3, [(1, 1)])


def test_normalized_adjacency_single_edge():
    g = build_graph(2, [(0, 1)])
    assert np.allclose(normalized_adjacency(g), 0.5)


def test_normalized_adjacency_triangle():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert np.allclose(normalized_adjacency(g), 1.0 / 3.0)


def test_normalized_adjacency_path_matches_oracle():
    g = build_graph(3, [(0, 1), (1, 2)])
    assert np.allclose(normalized_adjacency(g), brute_force_normalized_adjacency(g),
                       atol=1e-15)


def test_normalized_operators_exactly_symmetric(rng):
    for _ in range(5):
        g = random_graph(rng, 8, p=0.5)
        a_hat = normalized_adjacency(g)
        l_hat = normalized_laplacian(g)
        assert np.array_equal(a_hat, a_hat.T)
        assert np.array_equal(l_hat, l_hat.T)


def test_laplacian_single_edge():
    g = build_graph(2, [(0, 1)])
    assert np.allclose(normalized_laplacian(g), [[0.5, -0.5], [-0.5, 0.5]])


def test_laplacian_is_identity_minus_adjacency(rng):
    g = random_graph(rng, 10, p=0.4)
    expected = np.eye(10) - normalized_adjacency(g)
    assert np.array_equal(normalized_laplacian(g), expected)


def test_laplacian_annihilates_degree_scaled_constant(rng):
    g = random_graph(rng, 9, p=0.5)
    a = adjacency_matrix(g)
    kernel_vec = np.sqrt(a.sum(axis=1) + 1.0)
    assert np.abs(normalized_laplacian(g) @ kernel_vec).max() < 1e-12


def test_laplacian_eigenvalues_in_range(rng):
    for _ in range(5):
        g = random_graph(rng, 8, p=0.4)
        eigs = np.linalg.eigvalsh(normalized_laplacian(g))
        assert eigs.min() > -1e-9
        assert eigs.max() < 2.0 + 1e-9


def test_complete_graph_spectrum_against_oracle():
    for n in range(2, 9):
        g = build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
        l_hat = np.eye(n) - brute_force_normalized_adjacency(g)
        eigs = np.sort(np.linalg.eigvalsh(l_hat))
        assert abs(eigs[0]) < 1e-9
        assert np.allclose(eigs[1:], 1.0, atol=1e-9)
        assert np.allclose(np.sort(np.linalg.eigvalsh(normalized_laplacian(g))), eigs,
                           atol=1e-12)


def test_homophily_all_same_labels():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)], labels=[1, 1, 1])
    assert homophily_level(g) == 1.0


def test_homophily_alternating_path():
    g = build_graph(3, [(0, 1), (1, 2)], labels=[0, 1, 0])
    assert homophily_level(g) == 0.0


def test_homophily_half_cycle():
    # 4-cycle labelled A,A,B,B: edges (0,1) and (2,3) match, (1,2) and (3,0) cross
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], labels=[0, 0, 1, 1])
    assert homophily_level(g) == 0.5


def test_homophily_requires_labels():
    g = build_graph(2, [(0, 1)])
    with pytest.raises(GraphError, match="labels"):
        homophily_level(g)
