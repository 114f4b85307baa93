import numpy as np
import pytest

from ringflow.kernel import build_kernel, sinc
from ringflow.single_particle import (
    current_j,
    delta1_quadratic,
    delta1_quadrature,
    lambda_ring,
)

from _oracles import j_wavefunction


def _unit(rng, dim):
    c = rng.standard_normal(dim)
    return c / np.linalg.norm(c)


def test_n1_closed_form():
    # 2x2 kernel [[0, (a/pi) sinc a], [(a/pi) sinc a, 2a/pi]] has smallest
    # eigenvalue (a/pi) (1 - sqrt(1 + sinc^2 a)).
    for alpha in (0.1, 0.37, 0.9, 1.7):
        expected = (alpha / np.pi) * (1.0 - np.sqrt(1.0 + sinc(alpha) ** 2))
        assert lambda_ring(alpha, 1).lambda_ring == pytest.approx(expected, abs=1e-14)


def test_n1_at_alpha_pi_vanishes():
    assert abs(lambda_ring(np.pi, 1).lambda_ring) < 1e-15


def test_minimizer_is_normalized_unit_eigenvector():
    bound = lambda_ring(0.8, 30)
    kernel = build_kernel(0.8, 30)
    assert np.linalg.norm(bound.minimizer) == pytest.approx(1.0, abs=1e-12)
    assert bound.residual <= 1e-10 * np.linalg.norm(kernel.entries)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        lambda_ring(0.5, 0)
    with pytest.raises(ValueError):
        lambda_ring(-0.5, 5)


def test_delta1_quadratic_basis_vectors():
    alpha, n_max = 0.7, 6
    kernel = build_kernel(alpha, n_max)
    e0 = np.zeros(n_max + 1)
    e0[0] = 1.0
    assert delta1_quadratic(e0, kernel) == 0.0
    for m in (1, 3, 6):
        em = np.zeros(n_max + 1)
        em[m] = 1.0
        assert delta1_quadratic(em, kernel) == pytest.approx(2.0 * m * alpha / np.pi, rel=5e-16)


def test_delta1_quadratic_of_minimizer_is_lambda():
    for alpha, n_max in ((0.3, 10), (0.9, 40), (1.2, 80)):
        bound = lambda_ring(alpha, n_max)
        kernel = build_kernel(alpha, n_max)
        assert delta1_quadratic(bound.minimizer, kernel) == pytest.approx(
            bound.lambda_ring, abs=1e-12
        )


def test_delta1_quadratic_dimension_mismatch():
    with pytest.raises(ValueError):
        delta1_quadratic(np.zeros(3), build_kernel(0.5, 3))


def test_current_single_mode_is_constant():
    rng = np.random.default_rng(2)
    for m in (0, 1, 4):
        c = np.zeros(6)
        c[m] = 1.0
        for _ in range(5):
            theta, t = rng.uniform(0.0, 2.0 * np.pi), rng.uniform(-3.0, 3.0)
            assert current_j(c, theta, t) == pytest.approx(m / (2.0 * np.pi), abs=1e-15)


def test_current_two_mode_hand_value():
    # Hand expansion at theta = t = 0 for c = (e0 + e1)/sqrt(2): the double
    # sum has cross terms (0,1) and (1,0), each (m+n) c_m c_n = 1/2, plus the
    # diagonal (1,1) term 2 * 1/2, so j = (1/2 + 1/2 + 1) / (4 pi) = 1/(2 pi).
    c = np.zeros(2)
    c[0] = c[1] = 1.0 / np.sqrt(2.0)
    assert current_j(c, 0.0, 0.0) == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-15)
    assert current_j(c, 0.0, 0.0) == pytest.approx(j_wavefunction(c, 0.0, 0.0), abs=1e-15)


def test_current_matches_wavefunction_definition():
    rng = np.random.default_rng(13)
    for _ in range(20):
        c = _unit(rng, int(rng.integers(2, 9)))
        theta, t = rng.uniform(0.0, 2.0 * np.pi), rng.uniform(-3.0, 3.0)
        assert current_j(c, theta, t) == pytest.approx(j_wavefunction(c, theta, t), abs=1e-13)


def test_current_requires_normalization():
    with pytest.raises(ValueError):
        current_j(np.array([1.0, 1.0]), 0.0, 0.0)


def test_quadrature_single_modes():
    assert abs(delta1_quadrature(np.array([1.0, 0.0]), 0.9)) < 1e-15
    # Mode 1 carries the constant current 1/(2 pi); times T = 4 alpha.
    alpha = 0.9
    assert delta1_quadrature(np.array([0.0, 1.0]), alpha) == pytest.approx(
        2.0 * alpha / np.pi, abs=1e-10
    )


def test_quadrature_matches_quadratic_form():
    rng = np.random.default_rng(19)
    for _ in range(50):
        n_max = int(rng.integers(1, 11))
        c = _unit(rng, n_max + 1)
        alpha = float(rng.uniform(0.05, 1.8))
        kernel = build_kernel(alpha, n_max)
        assert delta1_quadrature(c, alpha) == pytest.approx(
            delta1_quadratic(c, kernel), abs=1e-8
        )


def test_quadrature_rejects_few_points():
    with pytest.raises(ValueError):
        delta1_quadrature(np.array([1.0, 0.0]), 0.5, quad_points=32)


def test_variational_monotonicity_in_n():
    for alpha in (0.3, 0.8, 1.164):
        previous = np.inf
        for n_max in range(1, 13):
            value = lambda_ring(alpha, n_max).lambda_ring
            assert value <= previous + 1e-14
            previous = value


def test_bound_floor():
    # The untruncated bound is the infimum; no truncation can go below it.
    for alpha in np.arange(0.1, 2.01, 0.1):
        for n_max in (5, 25, 100):
            assert lambda_ring(float(alpha), n_max).lambda_ring >= -0.116817
