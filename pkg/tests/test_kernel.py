import numpy as np
import pytest

from ringflow.kernel import (
    KernelMatrix,
    block_kernel_apply,
    build_kernel,
    mode_energies,
    period_from_alpha,
    sinc,
    validate_alpha,
)

from _oracles import dense_block_kernel, flatten_first_index_fast, kernel_entry_highprec


def test_sinc_removable_singularity():
    assert sinc(0.0) == 1.0


def test_sinc_known_values():
    assert abs(sinc(np.pi)) < 1e-15
    assert abs(sinc(np.pi / 2.0) - 2.0 / np.pi) < 1e-15


def test_sinc_even():
    rng = np.random.default_rng(7)
    z = rng.uniform(-60.0, 60.0, 1000)
    assert np.array_equal(sinc(z), sinc(-z))


def test_sinc_small_argument_branch():
    z = 9e-9
    assert sinc(z) == 1.0 - z * z / 6.0
    assert abs(sinc(1.1e-8) - 1.0) < 1e-15


def test_validate_alpha_rejects_bad_values():
    for bad in (0.0, -0.3, float("inf"), float("nan")):
        with pytest.raises(ValueError):
            validate_alpha(bad)
    assert validate_alpha(0.4) == 0.4


def test_period_is_four_alpha():
    assert period_from_alpha(0.25) == 1.0


def test_mode_energies():
    np.testing.assert_array_equal(mode_energies(3), [0.0, 0.5, 2.0, 4.5])


def test_kernel_at_alpha_pi_n1():
    kernel = build_kernel(np.pi, 1)
    np.testing.assert_allclose(kernel.entries, [[0.0, 0.0], [0.0, 2.0]], atol=1e-15)


def test_kernel_zero_mode_entry_exact():
    for alpha in (0.1, 0.7, 2.3):
        assert build_kernel(alpha, 4).entries[0, 0] == 0.0


def test_kernel_matches_high_precision_formula():
    # Independent 50-digit recomputation of every entry.
    alpha, n_max = 0.5, 2
    kernel = build_kernel(alpha, n_max)
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            assert abs(kernel.entries[m, n] - kernel_entry_highprec(alpha, m, n)) < 1e-15


def test_kernel_symmetry_bitwise_and_diagonal():
    rng = np.random.default_rng(3)
    for _ in range(10):
        alpha = float(rng.uniform(0.05, 2.5))
        n_max = int(rng.integers(0, 31))
        kernel = build_kernel(alpha, n_max)
        assert np.array_equal(kernel.entries, kernel.entries.T)
        m = np.arange(n_max + 1)
        np.testing.assert_allclose(
            np.diagonal(kernel.entries), 2.0 * m * alpha / np.pi, rtol=5e-16
        )


def test_kernel_rejects_nonpositive_alpha():
    with pytest.raises(ValueError):
        build_kernel(-1.0, 3)
    with pytest.raises(ValueError):
        build_kernel(0.0, 3)


def test_kernel_rejects_negative_n():
    with pytest.raises(ValueError):
        build_kernel(0.5, -1)


def test_kernel_entries_are_immutable():
    kernel = build_kernel(0.5, 3)
    with pytest.raises(ValueError):
        kernel.entries[0, 0] = 1.0


def test_block_apply_diagonal_kernel_scales_rows():
    diag = np.diag([1.0, 2.0, 3.0])
    kernel = KernelMatrix(alpha=1.0, n_max=2, entries=diag)
    rng = np.random.default_rng(0)
    c = rng.standard_normal((3, 3))
    np.testing.assert_array_equal(block_kernel_apply(kernel, c), diag @ c)


def test_block_apply_outer_product_linearity():
    kernel = build_kernel(0.8, 3)
    rng = np.random.default_rng(1)
    v = rng.standard_normal(4)
    outer = np.outer(v, v)
    np.testing.assert_allclose(
        block_kernel_apply(kernel, outer), np.outer(kernel.entries @ v, v), atol=1e-15
    )


def test_block_apply_matches_explicit_block_diagonal():
    # Oracle: assemble the full block-diagonal matrix and act on flattened c.
    rng = np.random.default_rng(11)
    for n_max in range(5):
        kernel = build_kernel(float(rng.uniform(0.1, 2.0)), n_max)
        big = dense_block_kernel(kernel.entries)
        for _ in range(25):
            c = rng.standard_normal((n_max + 1, n_max + 1))
            direct = block_kernel_apply(kernel, c)
            via_flat = (big @ flatten_first_index_fast(c)).reshape(
                (n_max + 1, n_max + 1), order="F"
            )
            np.testing.assert_allclose(direct, via_flat, atol=1e-13)


def test_block_apply_dimension_mismatch():
    kernel = build_kernel(0.5, 3)
    with pytest.raises(ValueError):
        block_kernel_apply(kernel, np.zeros((3, 3)))
