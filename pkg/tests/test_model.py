import math

import numpy as np
import pytest
from hypothesis import given, settings
from strategies import stable_configs

from dressedmodes import (
    CouplingMatrix,
    FrequencyConvention,
    InvalidParameterError,
    Mode,
    ModelConfig,
    SphericalCavityPreset,
    build_config_from_preset,
    build_interaction_matrix,
    diagonalize,
    load_config,
    random_config,
)


class TestModelConfig:
    def test_mode_order_preserved(self):
        modes = (Mode(3.0, 0.1), Mode(1.0, -0.2), Mode(2.0, 0.0))
        config = ModelConfig(omega0=1.0, modes=modes)
        assert config.modes == modes
        assert config.n_modes == 3
        assert config.dim == 4

    def test_plain_pairs_coerced(self):
        config = ModelConfig(omega0=1.0, modes=[(2.0, 0.5)])
        assert config.modes == (Mode(2.0, 0.5),)

    def test_hbar_defaults_to_one(self):
        assert ModelConfig(omega0=1.0, modes=[(1.0, 0.0)]).hbar == 1.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(omega0=0.0, modes=[(1.0, 0.0)]),
            dict(omega0=-1.0, modes=[(1.0, 0.0)]),
            dict(omega0=1.0, modes=[]),
            dict(omega0=1.0, modes=[(0.0, 0.0)]),
            dict(omega0=1.0, modes=[(-2.0, 0.0)]),
            dict(omega0=1.0, modes=[(1.0, 0.0)], hbar=0.0),
        ],
    )
    def test_invalid_parameters_rejected(self, kwargs):
        with pytest.raises(InvalidParameterError):
            ModelConfig(**kwargs)

    def test_negative_and_zero_couplings_allowed(self):
        ModelConfig(omega0=1.0, modes=[(1.0, -0.5), (2.0, 0.0)])


class TestPreset:
    def test_paper_convention_single_mode(self):
        config = build_config_from_preset(
            SphericalCavityPreset(g=0.5, R=1.0, N=1)
        )
        assert config.modes[0].omega == pytest.approx(math.pi, rel=1e-15)
        # sqrt(2 g) = 1, so c_1 = omega_1 / R = pi
        assert config.modes[0].c == pytest.approx(math.pi, rel=1e-15)
        assert config.hbar == 1.0

    def test_linear_convention_two_modes(self):
        config = build_config_from_preset(
            SphericalCavityPreset(
                g=0.5, R=2.0, N=2, frequency_convention=FrequencyConvention.LINEAR
            )
        )
        omegas = [m.omega for m in config.modes]
        cs = [m.c for m in config.modes]
        assert omegas == pytest.approx([math.pi / 2, math.pi], rel=1e-15)
        assert cs == pytest.approx([math.pi / 4, math.pi / 2], rel=1e-15)

    def test_paper_frequencies_decrease_with_k(self):
        config = build_config_from_preset(SphericalCavityPreset(g=0.1, R=1.0, N=4))
        omegas = [m.omega for m in config.modes]
        assert omegas == sorted(omegas, reverse=True)

    @pytest.mark.parametrize("bad", [dict(g=0.0), dict(R=0.0), dict(N=0), dict(g=-1.0)])
    def test_invalid_preset_rejected(self, bad):
        kwargs = dict(g=0.5, R=1.0, N=1)
        kwargs.update(bad)
        with pytest.raises(InvalidParameterError):
            build_config_from_preset(SphericalCavityPreset(**kwargs))

    def test_preset_determinism(self):
        a = build_config_from_preset(SphericalCavityPreset(g=0.37, R=2.1, N=6))
        b = build_config_from_preset(SphericalCavityPreset(g=0.37, R=2.1, N=6))
        assert a == b  # bit-identical floats


class TestInteractionMatrix:
    def test_single_mode_entries(self):
        matrix = build_interaction_matrix(ModelConfig(omega0=2.0, modes=[(3.0, 0.5)]))
        assert np.array_equal(matrix.entries, [[4.0, -0.5], [-0.5, 9.0]])

    def test_decoupled_is_diagonal(self):
        matrix = build_interaction_matrix(ModelConfig(omega0=1.0, modes=[(1.0, 0.0)]))
        assert np.array_equal(matrix.entries, np.eye(2))

    def test_arrowhead_structure(self):
        matrix = build_interaction_matrix(
            ModelConfig(omega0=1.0, modes=[(2.0, 0.3), (3.0, 0.4)])
        )
        assert np.array_equal(matrix.entries[0], [1.0, -0.3, -0.4])
        assert matrix.entries[1, 2] == 0.0
        assert matrix.entries[2, 1] == 0.0

    def test_exactly_symmetric(self):
        rng = np.random.default_rng(3)
        config = random_config(rng, 17)
        matrix = build_interaction_matrix(config)
        assert np.array_equal(matrix.entries, matrix.entries.T)

    def test_entries_read_only(self):
        matrix = build_interaction_matrix(ModelConfig(omega0=1.0, modes=[(1.0, 0.1)]))
        with pytest.raises(ValueError):
            matrix.entries[0, 0] = 5.0

    def test_asymmetric_array_rejected(self):
        with pytest.raises(InvalidParameterError):
            CouplingMatrix(entries=np.array([[1.0, 0.1], [0.2, 4.0]]))

    def test_non_arrowhead_rejected(self):
        bad = np.array([[1.0, -0.1, -0.1], [-0.1, 4.0, 0.5], [-0.1, 0.5, 9.0]])
        with pytest.raises(InvalidParameterError):
            CouplingMatrix(entries=bad)

    def test_nonpositive_diagonal_rejected(self):
        with pytest.raises(InvalidParameterError):
            CouplingMatrix(entries=np.array([[0.0, 0.0], [0.0, 1.0]]))


class TestRoundTrip:
    @given(config=stable_configs())
    @settings(max_examples=50, deadline=None)
    def test_matrix_reconstructs_config(self, config):
        matrix = build_interaction_matrix(config)
        omega0 = math.sqrt(matrix.entries[0, 0])
        omegas = [math.sqrt(matrix.entries[k, k]) for k in range(1, config.dim)]
        cs = [-matrix.entries[k, 0] for k in range(1, config.dim)]
        assert omega0 == pytest.approx(config.omega0, rel=1e-15)
        for k, mode in enumerate(config.modes):
            assert omegas[k] == pytest.approx(mode.omega, rel=1e-15)
            assert cs[k] == mode.c  # negation is exact


class TestRandomConfig:
    def test_deterministic_for_equal_seeds(self):
        a = random_config(np.random.default_rng(11), 6)
        b = random_config(np.random.default_rng(11), 6)
        assert a == b

    def test_always_diagonalizable(self):
        rng = np.random.default_rng(99)
        for _ in range(25):
            n = int(rng.integers(1, 12))
            config = random_config(rng, n)
            diagonalize(build_interaction_matrix(config))  # must not raise

    def test_rejects_bad_arguments(self):
        rng = np.random.default_rng(0)
        with pytest.raises(InvalidParameterError):
            random_config(rng, 0)
        with pytest.raises(InvalidParameterError):
            random_config(rng, 3, max_fill=1.5)


class TestLoadConfig:
    def test_model_table(self, write_toml):
        path = write_toml(
            """
[model]
omega0 = 1.5
hbar = 2.0
modes = [{omega = 1.0, c = 0.1}, {omega = 2.0, c = -0.3}]
"""
        )
        config = load_config(path)
        assert config.omega0 == 1.5
        assert config.hbar == 2.0
        assert config.modes == (Mode(1.0, 0.1), Mode(2.0, -0.3))

    def test_hbar_optional(self, write_toml):
        path = write_toml("[model]\nomega0 = 1.0\nmodes = [{omega = 1.0, c = 0.0}]\n")
        assert load_config(path).hbar == 1.0

    def test_preset_table(self, write_toml):
        path = write_toml(
            """
[preset]
type = "spherical_cavity"
g = 0.5
R = 1.0
N = 2
convention = "paper"
"""
        )
        config = load_config(path)
        assert config == build_config_from_preset(SphericalCavityPreset(g=0.5, R=1.0, N=2))

    def test_model_and_preset_mutually_exclusive(self, write_toml):
        path = write_toml(
            """
[model]
omega0 = 1.0
modes = [{omega = 1.0, c = 0.0}]
[preset]
type = "spherical_cavity"
g = 0.5
R = 1.0
N = 1
convention = "paper"
"""
        )
        with pytest.raises(InvalidParameterError):
            load_config(path)

    @pytest.mark.parametrize(
        "text",
        [
            "[model]\nomega0 = 1.0\n",  # missing modes
            "[model]\nomega0 = 1.0\nmodes = []\n",  # empty modes
            "[model]\nomega0 = 1.0\nmodes = [{omega = 1.0}]\n",  # missing c
            "[model]\nomega0 = 1.0\nmodes = [{omega = 1.0, c = 0.0}]\nextra = 1\n",
            "[other]\nx = 1\n",
            '[preset]\ntype = "cube"\ng = 1.0\nR = 1.0\nN = 1\nconvention = "paper"\n',
            '[preset]\ntype = "spherical_cavity"\ng = 1.0\nR = 1.0\nN = 1\nconvention = "cubic"\n',
            '[preset]\ntype = "spherical_cavity"\ng = 1.0\nR = 1.0\nconvention = "paper"\n',
            '[model]\nomega0 = true\nmodes = [{omega = 1.0, c = 0.0}]\n',
        ],
    )
    def test_schema_violations_rejected(self, write_toml, text):
        with pytest.raises(InvalidParameterError):
            load_config(write_toml(text))
