import pytest

from dressedmodes import Mode, ModelConfig, build_interaction_matrix, diagonalize


@pytest.fixture
def golden_config():
    """Two equal bare frequencies with a weak coupling: everything about
    this model has a closed form."""
    return ModelConfig(omega0=1.0, modes=(Mode(1.0, 0.1),))


@pytest.fixture
def golden_basis(golden_config):
    return diagonalize(build_interaction_matrix(golden_config))


@pytest.fixture
def write_toml(tmp_path):
    def _write(text, name="model.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write
