import math

import numpy as np
import pytest
from hypothesis import given, settings

import dressedmodes.spectral
from dressedmodes import (
    CouplingMatrix,
    ModelConfig,
    NoConvergenceError,
    NonPositiveSpectrumError,
    build_interaction_matrix,
    diagonalize,
    matrix_power,
    random_config,
    stability_margin,
)

from strategies import stable_configs


def two_mode_eigenvalues(w0, w1, c):
    """Independent closed form for the 2 x 2 symmetric eigenproblem."""
    mean = 0.5 * (w0 * w0 + w1 * w1)
    radius = math.sqrt(0.25 * (w0 * w0 - w1 * w1) ** 2 + c * c)
    return mean - radius, mean + radius


class TestDiagonalize:
    def test_already_diagonal(self):
        basis = diagonalize(CouplingMatrix(entries=np.diag([1.0, 4.0])))
        assert np.array_equal(basis.transform, np.eye(2))
        assert np.array_equal(basis.frequencies, [1.0, 2.0])

    def test_golden_two_mode_frequencies(self, golden_basis):
        low, high = two_mode_eigenvalues(1.0, 1.0, 0.1)
        assert (low, high) == (0.9, 1.1)
        assert basis_freq_sq(golden_basis) == pytest.approx([0.9, 1.1], rel=1e-12)

    def test_golden_two_mode_is_45_degree_rotation(self, golden_basis):
        r = 1.0 / math.sqrt(2.0)
        assert golden_basis.transform == pytest.approx(
            np.array([[r, r], [r, -r]]), abs=1e-14
        )

    def test_over_coupled_raises(self):
        matrix = build_interaction_matrix(ModelConfig(omega0=1.0, modes=[(1.0, 1.0)]))
        with pytest.raises(NonPositiveSpectrumError):
            diagonalize(matrix)

    def test_determinism_bit_identical(self):
        matrix = build_interaction_matrix(random_config(np.random.default_rng(5), 9))
        a = diagonalize(matrix)
        b = diagonalize(matrix)
        assert np.array_equal(a.transform, b.transform)
        assert np.array_equal(a.frequencies, b.frequencies)

    def test_exhausted_sweep_budget_raises(self, monkeypatch, golden_config):
        monkeypatch.setattr(dressedmodes.spectral, "_SWEEP_FACTOR", 0)
        with pytest.raises(NoConvergenceError):
            diagonalize(build_interaction_matrix(golden_config))

    def test_degenerate_spectrum_keeps_invariants(self):
        # Two decoupled modes at the same frequency: the eigenspace is a
        # plane, so assert invariants rather than specific entries.
        matrix = build_interaction_matrix(
            ModelConfig(omega0=2.0, modes=[(2.0, 0.0), (5.0, 0.0)])
        )
        basis = diagonalize(matrix)
        assert_valid_basis(matrix, basis)
        assert basis.frequencies == pytest.approx([2.0, 2.0, 5.0])

    def test_n64_invariants(self):
        config = random_config(np.random.default_rng(64), 64)
        matrix = build_interaction_matrix(config)
        assert_valid_basis(matrix, diagonalize(matrix))


def basis_freq_sq(basis):
    return [float(f) * float(f) for f in basis.frequencies]


def assert_valid_basis(matrix, basis):
    __tracebackhide__ = True
    dim = basis.dim
    t = basis.transform
    assert np.max(np.abs(t.T @ t - np.eye(dim))) <= 1e-12 * dim
    rebuilt = (t * basis.frequencies**2) @ t.T
    assert np.max(np.abs(rebuilt - matrix.entries)) <= 1e-10 * np.max(
        np.abs(matrix.entries)
    )
    freqs = basis.frequencies
    assert np.all(freqs > 0.0)
    assert np.all(np.diff(freqs) >= 0.0)
    for j in range(dim):
        lead = int(np.argmax(np.abs(t[:, j])))
        assert t[lead, j] > 0.0


class TestBasisInvariants:
    @given(config=stable_configs())
    @settings(max_examples=40, deadline=None)
    def test_random_models(self, config):
        matrix = build_interaction_matrix(config)
        assert_valid_basis(matrix, diagonalize(matrix))

    @given(config=stable_configs(max_modes=2))
    @settings(max_examples=40, deadline=None)
    def test_two_mode_matches_closed_form(self, config):
        if config.n_modes != 1:
            return
        basis = diagonalize(build_interaction_matrix(config))
        low, high = two_mode_eigenvalues(
            config.omega0, config.modes[0].omega, config.modes[0].c
        )
        got = basis_freq_sq(basis)
        assert got[0] == pytest.approx(low, rel=1e-12, abs=1e-13)
        assert got[1] == pytest.approx(high, rel=1e-12)


class TestMatrixPower:
    @pytest.fixture
    def random_case(self):
        config = random_config(np.random.default_rng(21), 6)
        matrix = build_interaction_matrix(config)
        return matrix, diagonalize(matrix)

    def test_alpha_one_reconstructs(self, random_case):
        matrix, basis = random_case
        scale = np.max(np.abs(matrix.entries))
        assert np.max(np.abs(matrix_power(basis, 1.0) - matrix.entries)) <= 1e-10 * scale

    def test_alpha_zero_is_identity(self, random_case):
        _, basis = random_case
        assert np.max(np.abs(matrix_power(basis, 0.0) - np.eye(basis.dim))) <= 1e-12

    def test_half_power_squares_back(self, random_case):
        matrix, basis = random_case
        root = matrix_power(basis, 0.5)
        scale = np.max(np.abs(matrix.entries))
        assert np.max(np.abs(root @ root - matrix.entries)) <= 1e-9 * scale

    @pytest.mark.parametrize("alpha", [-0.5, 0.25, 0.5, 1.0])
    @pytest.mark.parametrize("beta", [-0.5, 0.25, 0.5, 1.0])
    def test_power_composition(self, random_case, alpha, beta):
        _, basis = random_case
        combined = matrix_power(basis, alpha + beta)
        product = matrix_power(basis, alpha) @ matrix_power(basis, beta)
        scale = np.max(np.abs(combined))
        assert np.max(np.abs(product - combined)) <= 1e-9 * scale

    def test_result_symmetric_to_rounding(self, random_case):
        _, basis = random_case
        quarter = matrix_power(basis, 0.25)
        assert np.max(np.abs(quarter - quarter.T)) <= 1e-14 * np.max(np.abs(quarter))


class TestStabilityMargin:
    def test_simple_ratio(self):
        basis = diagonalize(CouplingMatrix(entries=np.diag([1.0, 4.0])))
        assert stability_margin(basis) == 0.25

    def test_degenerate_is_one(self):
        basis = diagonalize(build_interaction_matrix(
            ModelConfig(omega0=1.0, modes=[(1.0, 0.0)])
        ))
        assert stability_margin(basis) == 1.0

    def test_golden_ratio(self, golden_basis):
        assert stability_margin(golden_basis) == pytest.approx(0.9 / 1.1, rel=1e-12)
