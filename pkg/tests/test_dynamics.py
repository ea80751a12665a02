import numpy as np
import pytest

from hkgnn.dynamics import (FamilyTrendError, LayerSpec, ResponseCase, Verdict,
                            classify_response_case, closed_form_trajectory,
                            delayed_hfd_construct, dirichlet_energy, lfd_zeta_threshold,
                            make_hfd_zeta, propagate, simulate)
from hkgnn.filters import (FilterSpec, combined_response, constant, evaluate, heat_high,
                           heat_low, zero)
from hkgnn.graphs import adjacency_matrix, build_graph, normalized_laplacian
from hkgnn.spectral import apply_filter, decompose_graph

from conftest import random_connected_graph, random_graph


def spectral_energy_oracle(decomp, h):
    """Independent oracle: sum_i lambda_i ||(U^T H)_i||^2."""
    coeffs = decomp.eigenvectors.T @ np.atleast_2d(h.T).T
    return float(decomp.eigenvalues @ (coeffs ** 2).sum(axis=1))


def heat_pair(theta_low=1.0, theta_high=1.0):
    return FilterSpec(heat_low(), theta=theta_low), FilterSpec(heat_high(), theta=theta_high)


def test_energy_zero_on_kernel_direction(rng):
    g = random_connected_graph(rng, 6)
    l_hat = normalized_laplacian(g)
    kernel_vec = np.sqrt(adjacency_matrix(g).sum(axis=1) + 1.0)
    assert dirichlet_energy(kernel_vec, l_hat) < 1e-12


def test_energy_of_unit_eigenvector_is_eigenvalue(rng):
    g = random_connected_graph(rng, 7)
    d = decompose_graph(g)
    l_hat = normalized_laplacian(g)
    for i in (1, 3, 6):
        assert dirichlet_energy(d.eigenvectors[:, i], l_hat) == pytest.approx(
            d.eigenvalues[i], abs=1e-10)


def test_energy_matches_spectral_identity(rng):
    g = random_graph(rng, 6, p=0.5)
    d = decompose_graph(g)
    l_hat = normalized_laplacian(g)
    for _ in range(10):
        h = rng.standard_normal((6, 3))
        assert dirichlet_energy(h, l_hat) == pytest.approx(
            spectral_energy_oracle(d, h), abs=1e-9)


def test_energy_dimension_mismatch(rng):
    g = random_graph(rng, 4)
    with pytest.raises(ValueError):
        dirichlet_energy(np.zeros((5, 2)), normalized_laplacian(g))


def test_propagate_zero_filters(rng):
    g = random_graph(rng, 5, p=0.6)
    d = decompose_graph(g)
    layer = LayerSpec(FilterSpec(zero()), FilterSpec(zero()), np.eye(2))
    assert np.allclose(propagate(layer, d, rng.standard_normal((5, 2))), 0.0)


def test_propagate_reconstruction_pair_is_identity(rng):
    # Low/high responses summing to one with identity weights leave H unchanged.
    g = random_connected_graph(rng, 6)
    d = decompose_graph(g)
    layer = LayerSpec(FilterSpec(constant(0.25)), FilterSpec(constant(0.75)), np.eye(3))
    h = rng.standard_normal((6, 3))
    assert np.abs(propagate(layer, d, h) - h).max() < 1e-8


def test_propagate_single_edge_closed_form():
    g = build_graph(2, [(0, 1)])
    d = decompose_graph(g)
    layer = LayerSpec(*heat_pair(), weight=np.eye(2))
    got = propagate(layer, d, np.eye(2))
    gains = np.array([2.0, np.exp(-1.0) + np.e])
    expected = (d.eigenvectors * gains) @ d.eigenvectors.T
    assert np.allclose(got, expected, atol=1e-10)


def test_propagate_matches_two_branch_sum(rng):
    g = random_graph(rng, 7, p=0.5)
    d = decompose_graph(g)
    low, high = heat_pair(theta_low=rng.random(7), theta_high=rng.random(7))
    w = rng.standard_normal((3, 3))
    layer = LayerSpec(low, high, w)
    h = rng.standard_normal((7, 3))
    two_branch = (apply_filter(d, evaluate(low, d).values, h) @ w
                  + apply_filter(d, evaluate(high, d).values, h) @ w)
    assert np.abs(propagate(layer, d, h) - two_branch).max() < 1e-10


def test_simulate_validates_input(rng):
    g = random_graph(rng, 4, p=0.6)
    d = decompose_graph(g)
    layer = LayerSpec(*heat_pair(), weight=np.eye(2))
    with pytest.raises(ValueError, match="nonzero"):
        simulate(layer, d, np.zeros((4, 2)), 10)
    with pytest.raises(ValueError, match="step"):
        simulate(layer, d, np.ones((4, 2)), 0)


def test_simulate_zero_filters_collapse(rng):
    g = random_graph(rng, 5, p=0.6)
    d = decompose_graph(g)
    layer = LayerSpec(FilterSpec(zero()), FilterSpec(zero()), np.eye(2))
    report = simulate(layer, d, rng.standard_normal((5, 2)), 5)
    assert np.array_equal(report.energy[1:], np.zeros(5))
    assert report.verdict is Verdict.LFD


def test_simulate_lfd_for_smoothing_dominant(rng):
    g = random_connected_graph(rng, 10)
    d = decompose_graph(g)
    zeta = 0.5 * lfd_zeta_threshold(FilterSpec(heat_low()), FilterSpec(heat_high()), d)
    layer = LayerSpec(*heat_pair(theta_high=zeta), weight=np.eye(3))
    report = simulate(layer, d, rng.standard_normal((10, 3)), 300)
    assert report.verdict is Verdict.LFD
    assert report.rayleigh[-1] < 1e-3


def test_simulate_hfd_for_sharpening_dominant(rng):
    g = random_connected_graph(rng, 10)
    d = decompose_graph(g)
    layer = LayerSpec(*heat_pair(theta_high=3.0), weight=np.eye(3))
    report = simulate(layer, d, rng.standard_normal((10, 3)), 500)
    assert report.verdict is Verdict.HFD
    assert report.dominant_frequency == pytest.approx(d.rho, abs=1e-3)
    l_hat = normalized_laplacian(g)
    residual = np.linalg.norm(l_hat @ report.final_state - d.rho * report.final_state)
    assert residual < 1e-3


def test_simulate_rayleigh_within_bounds(rng):
    g = random_connected_graph(rng, 8)
    d = decompose_graph(g)
    layer = LayerSpec(*heat_pair(theta_high=2.0), weight=np.eye(2))
    report = simulate(layer, d, rng.standard_normal((8, 2)), 50)
    assert np.all(report.rayleigh >= -1e-9)
    assert np.all(report.rayleigh <= d.rho + 1e-9)


def test_closed_form_single_step_equals_propagate(rng):
    g = random_graph(rng, 6, p=0.5)
    d = decompose_graph(g)
    w = rng.standard_normal((3, 3))
    w = (w + w.T) / 2.0
    layer = LayerSpec(*heat_pair(), weight=w)
    h0 = rng.standard_normal((6, 3))
    assert np.allclose(closed_form_trajectory(layer, d, h0, 1),
                       propagate(layer, d, h0), atol=1e-10)


def test_closed_form_identity_dynamics(rng):
    g = random_connected_graph(rng, 5)
    d = decompose_graph(g)
    layer = LayerSpec(FilterSpec(constant(1.0)), FilterSpec(zero()), np.eye(2))
    h0 = rng.standard_normal((5, 2))
    assert np.abs(closed_form_trajectory(layer, d, h0, 7) - h0).max() < 1e-8


def test_closed_form_matches_iterated_propagate(rng):
    g = random_connected_graph(rng, 5)
    d = decompose_graph(g)
    w = rng.standard_normal((3, 3))
    w = (w + w.T) / 2.0
    layer = LayerSpec(*heat_pair(theta_low=rng.random(5), theta_high=rng.random(5)),
                      weight=w)
    h0 = rng.standard_normal((5, 3))
    h_iter = h0
    for _ in range(6):
        h_iter = propagate(layer, d, h_iter)
    h_closed = closed_form_trajectory(layer, d, h0, 6)
    rel = np.linalg.norm(h_closed - h_iter) / np.linalg.norm(h_iter)
    assert rel < 1e-6


def test_closed_form_requires_symmetric_weight(rng):
    g = random_graph(rng, 4, p=0.6)
    d = decompose_graph(g)
    layer = LayerSpec(*heat_pair(), weight=np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="symmetric"):
        closed_form_trajectory(layer, d, np.ones((4, 2)), 2)


def test_make_hfd_zeta_two_point_bound():
    # On the single edge the sum turns increasing past (1 - e^-1)/(e - 1).
    g = build_graph(2, [(0, 1)])
    d = decompose_graph(g)
    zeta = make_hfd_zeta(FilterSpec(heat_low()), FilterSpec(heat_high()), d)
    bound = (1.0 - np.exp(-1.0)) / (np.e - 1.0)
    assert zeta >= bound
    grid_below = 10.0 ** (np.floor(np.log10(bound) * 25.0) / 25.0)
    assert zeta <= grid_below * 10.0 ** (2.0 / 25.0)  # lands within two grid steps


def test_make_hfd_zeta_zero_low_branch(rng):
    g = random_connected_graph(rng, 6)
    d = decompose_graph(g)
    zeta = make_hfd_zeta(FilterSpec(zero()), FilterSpec(heat_high()), d)
    assert zeta == pytest.approx(1e-2)


def test_make_hfd_zeta_rejects_decreasing_high_branch(rng):
    g = random_connected_graph(rng, 5)
    d = decompose_graph(g)
    with pytest.raises(FamilyTrendError):
        make_hfd_zeta(FilterSpec(heat_low()), FilterSpec(heat_low()), d)


def test_hfd_lfd_zeta_property(rng):
    # The grid zeta drives the dynamic to the top eigenspace; a sub-threshold
    # zeta sends it to the kernel.
    for _ in range(10):
        n = int(rng.integers(6, 16))
        g = random_connected_graph(rng, n)
        d = decompose_graph(g)
        low, high = FilterSpec(heat_low()), FilterSpec(heat_high())
        h0 = rng.standard_normal((n, 2))

        zeta_hfd = make_hfd_zeta(low, high, d)
        layer = LayerSpec(low, FilterSpec(heat_high(), theta=zeta_hfd), np.eye(2))
        assert simulate(layer, d, h0, 1500).verdict is Verdict.HFD

        zeta_lfd = 0.5 * lfd_zeta_threshold(low, high, d)
        layer = LayerSpec(low, FilterSpec(heat_high(), theta=zeta_lfd), np.eye(2))
        report = simulate(layer, d, h0, 200)
        assert report.verdict is Verdict.LFD
        assert report.rayleigh[-1] < 1e-3


def test_delayed_hfd_connected_graph(rng):
    g = random_connected_graph(rng, 8)
    d = decompose_graph(g)
    theta1, theta2 = delayed_hfd_construct(d, 1, 0.2)
    assert theta1[0] == 0.0 and theta2[0] == 0.0
    resp = combined_response(FilterSpec(heat_low(), theta=theta1),
                             FilterSpec(heat_high(), theta=theta2), d).values
    assert abs(resp[0]) == 0.0
    assert np.all(resp[1:] > 0.0)
    assert np.all(resp[1:] <= d.eigenvalues[1:] * 0.8 + 1e-12)


def test_delayed_hfd_two_component_graph():
    g = build_graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    d = decompose_graph(g)
    theta1, theta2 = delayed_hfd_construct(d, 2, 0.5)
    assert np.array_equal(theta1[:2], np.zeros(2))
    assert np.array_equal(theta2[:2], np.zeros(2))
    resp = combined_response(FilterSpec(heat_low(), theta=theta1),
                             FilterSpec(heat_high(), theta=theta2), d).values
    assert np.all(resp <= 0.5 * d.eigenvalues + 1e-12)


def test_delayed_hfd_margin_validation(rng):
    g = random_connected_graph(rng, 5)
    d = decompose_graph(g)
    with pytest.raises(ValueError, match="margin"):
        delayed_hfd_construct(d, 1, 1.0)
    with pytest.raises(ValueError, match="multiplicity"):
        delayed_hfd_construct(d, 2, 0.1)


def test_delayed_hfd_simulates_to_hfd(rng):
    g = random_connected_graph(rng, 9)
    d = decompose_graph(g)
    theta1, theta2 = delayed_hfd_construct(d, 1, 0.05)
    layer = LayerSpec(FilterSpec(heat_low(), theta=theta1),
                      FilterSpec(heat_high(), theta=theta2), np.eye(2))
    report = simulate(layer, d, rng.standard_normal((9, 2)), 1500)
    assert report.verdict is Verdict.HFD


def test_classify_delayed_construction_rises(rng):
    g = random_connected_graph(rng, 7)
    d = decompose_graph(g)
    theta1, theta2 = delayed_hfd_construct(d, 1, 0.1)
    case = classify_response_case(FilterSpec(heat_low(), theta=theta1),
                                  FilterSpec(heat_high(), theta=theta2), d)
    assert case is ResponseCase.INCREASING_SOMEWHERE


def test_classify_constant(rng):
    g = random_connected_graph(rng, 6)
    d = decompose_graph(g)
    case = classify_response_case(FilterSpec(constant(2.0)), FilterSpec(constant(1.0)), d)
    assert case is ResponseCase.CONSTANT


def test_classify_decreasing_exceeds_spectrum(rng):
    # A genuinely decreasing nonnegative response must exceed lambda at the kernel.
    g = random_connected_graph(rng, 6)
    d = decompose_graph(g)
    theta = (3.5 - d.eigenvalues / 2.0) * np.exp(d.eigenvalues)
    low = FilterSpec(heat_low(), theta=theta)
    high = FilterSpec(zero())
    case = classify_response_case(low, high, d)
    assert case is ResponseCase.DECREASING_ABOVE_SPECTRUM
    resp = combined_response(low, high, d).values
    assert np.all(resp > d.eigenvalues)


def test_classify_rejects_negative_theta(rng):
    g = random_connected_graph(rng, 5)
    d = decompose_graph(g)
    with pytest.raises(ValueError, match="nonnegative"):
        classify_response_case(FilterSpec(heat_low(), theta=-1.0),
                               FilterSpec(heat_high()), d)


def test_impossibility_of_decreasing_below_lambda(rng):
    # Zeroed kernel gains: no nonzero response is non-increasing over the
    # whole spectrum while staying at or below lambda.
    for _ in range(200):
        n = int(rng.integers(4, 11))
        g = random_graph(rng, n, p=0.45)
        d = decompose_graph(g)
        k = g.k_components
        theta1 = rng.random(n) * 2.0
        theta2 = rng.random(n) * 2.0
        theta1[:k] = 0.0
        theta2[:k] = 0.0
        resp = combined_response(FilterSpec(heat_low(), theta=theta1),
                                 FilterSpec(heat_high(), theta=theta2), d).values
        diffs = []
        prev = 0
        for i in range(1, n):
            if d.eigenvalues[i] - d.eigenvalues[prev] > 1e-9:
                diffs.append(resp[i] - resp[prev])
                prev = i
        non_increasing = all(df <= 1e-10 for df in diffs)
        below_lambda = np.all(resp <= d.eigenvalues + 1e-10)
        nonzero = np.abs(resp).max() > 1e-10
        assert not (non_increasing and below_lambda and nonzero)
