"""Problem definition: model parameters, cavity presets, and the interaction matrix.

A problem instance is one oscillator (index 0) coupled linearly to N field
modes (indices 1..N).  Everything downstream consumes the real symmetric
(N+1) x (N+1) interaction matrix built here, whose only off-diagonal entries
sit in row/column 0 (an arrowhead matrix).
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import InvalidParameterError

__all__ = [
    "Mode",
    "ModelConfig",
    "FrequencyConvention",
    "SphericalCavityPreset",
    "CouplingMatrix",
    "build_config_from_preset",
    "build_interaction_matrix",
    "random_config",
    "load_config",
]


class Mode(NamedTuple):
    """One field mode: its frequency and its coupling to the oscillator."""

    omega: float
    c: float


@dataclass(frozen=True)
class ModelConfig:
    """Physical parameters of one problem instance.

    Attributes:
        omega0: oscillator frequency, > 0 (radians per unit time).
        modes: ordered field modes (omega_k > 0, c_k any sign), length N >= 1.
            Order is significant and preserved; index k runs 1..N.
        hbar: action scale, > 0.  Energies come out in units of hbar * frequency.
    """

    omega0: float
    modes: tuple[Mode, ...]
    hbar: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega0", float(self.omega0))
        object.__setattr__(self, "hbar", float(self.hbar))
        object.__setattr__(
            self, "modes", tuple(Mode(float(w), float(c)) for w, c in self.modes)
        )
        if not self.omega0 > 0.0:
            raise InvalidParameterError(f"omega0 must be > 0, got {self.omega0}")
        if not self.hbar > 0.0:
            raise InvalidParameterError(f"hbar must be > 0, got {self.hbar}")
        if len(self.modes) < 1:
            raise InvalidParameterError("at least one field mode is required")
        for k, mode in enumerate(self.modes, start=1):
            if not mode.omega > 0.0:
                raise InvalidParameterError(
                    f"mode {k}: omega must be > 0, got {mode.omega}"
                )

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def dim(self) -> int:
        """Total number of degrees of freedom, N + 1."""
        return len(self.modes) + 1


class FrequencyConvention(enum.Enum):
    """How a spherical-cavity preset assigns mode frequencies.

    PAPER: omega_k = pi / k, a reciprocal spectrum decreasing with k.
    LINEAR: omega_k = k * pi / R, the conventional cavity spectrum
        increasing linearly with k.

    Both use c_k = (omega_k / R) * sqrt(2 g).
    """

    PAPER = "paper"
    LINEAR = "linear"


@dataclass(frozen=True)
class SphericalCavityPreset:
    """Named preset: oscillator at the center of a sphere of radius R.

    Attributes:
        g: interaction constant, > 0.
        R: sphere radius, > 0.
        N: number of retained field modes, >= 1.
        frequency_convention: see FrequencyConvention.
    """

    g: float
    R: float
    N: int
    frequency_convention: FrequencyConvention = FrequencyConvention.PAPER

    def __post_init__(self) -> None:
        if not self.g > 0.0:
            raise InvalidParameterError(f"g must be > 0, got {self.g}")
        if not self.R > 0.0:
            raise InvalidParameterError(f"R must be > 0, got {self.R}")
        if self.N < 1:
            raise InvalidParameterError(f"N must be >= 1, got {self.N}")


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Real symmetric arrowhead matrix holding all interactions.

    Row/column 0 is the oscillator, rows/columns 1..N the field modes.
    Entries: [0][0] = omega0^2, [k][k] = omega_k^2, [0][k] = [k][0] = -c_k,
    every other off-diagonal exactly 0.  The matrix is constructed
    symmetric; it is never symmetrized after the fact.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidParameterError(f"matrix must be square, got {arr.shape}")
        if arr.shape[0] < 2:
            raise InvalidParameterError("matrix must be at least 2 x 2 (N >= 1)")
        if not np.array_equal(arr, arr.T):
            raise InvalidParameterError("matrix must be exactly symmetric")
        if not np.all(np.diag(arr) > 0.0):
            raise InvalidParameterError("diagonal entries must be positive")
        interior = arr[1:, 1:]
        if np.any(interior[~np.eye(arr.shape[0] - 1, dtype=bool)] != 0.0):
            raise InvalidParameterError(
                "off-diagonal entries outside row/column 0 must be exactly 0"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def build_config_from_preset(preset: SphericalCavityPreset) -> ModelConfig:
    """Expand a spherical-cavity preset into an explicit mode list.

    Frequencies follow the preset's convention; couplings are
    c_k = (omega_k / R) * sqrt(2 g).  The preset fixes only the field
    sector, so the oscillator is placed at the cavity fundamental
    omega0 = pi / R.  hbar is set to 1.
    """
    root = math.sqrt(2.0 * preset.g)
    modes = []
    for k in range(1, preset.N + 1):
        if preset.frequency_convention is FrequencyConvention.PAPER:
            omega = math.pi / k
        else:
            omega = k * math.pi / preset.R
        modes.append(Mode(omega, (omega / preset.R) * root))
    return ModelConfig(omega0=math.pi / preset.R, modes=tuple(modes))


def build_interaction_matrix(config: ModelConfig) -> CouplingMatrix:
    """Assemble the arrowhead interaction matrix for a model.

    No floating-point work beyond squaring and negation.
    """
    dim = config.dim
    entries = np.zeros((dim, dim))
    entries[0, 0] = config.omega0 * config.omega0
    for k, mode in enumerate(config.modes, start=1):
        entries[k, k] = mode.omega * mode.omega
        entries[0, k] = -mode.c
        entries[k, 0] = -mode.c
    return CouplingMatrix(entries=entries)


def random_config(
    rng: np.random.Generator,
    n_modes: int,
    omega_range: tuple[float, float] = (0.1, 10.0),
    max_fill: float = 0.7,
) -> ModelConfig:
    """Draw a random stable model.

    The arrowhead matrix is positive definite exactly when
    omega0^2 > sum_k c_k^2 / omega_k^2 (Schur complement of the mode
    block), so couplings are scaled to fill at most `max_fill` of that
    budget.  Deterministic for a given generator state.
    """
    if n_modes < 1:
        raise InvalidParameterError(f"n_modes must be >= 1, got {n_modes}")
    if not 0.0 < max_fill < 1.0:
        raise InvalidParameterError(f"max_fill must be in (0, 1), got {max_fill}")
    lo, hi = omega_range
    omega0 = float(rng.uniform(lo, hi))
    omegas = rng.uniform(lo, hi, size=n_modes)
    raw = rng.uniform(-1.0, 1.0, size=n_modes)
    fill = float(rng.uniform(0.05, max_fill))
    weight = float(np.sum(raw * raw / (omegas * omegas)))
    # Quotient of roots, not root of quotient: stays finite even when the
    # raw weight underflows toward zero.
    scale = omega0 * math.sqrt(fill) / math.sqrt(weight) if weight > 0.0 else 0.0
    return ModelConfig(
        omega0=omega0,
        modes=tuple(Mode(float(w), float(c)) for w, c in zip(omegas, raw * scale)),
    )


_MODEL_KEYS = {"omega0", "hbar", "modes"}
_PRESET_KEYS = {"type", "g", "R", "N", "convention"}


def load_config(path: str | os.PathLike) -> ModelConfig:
    """Read a model from a TOML config file.

    Exactly one of the tables [model] or [preset] must be present.

    [model] keys: omega0 (number), hbar (number, optional, default 1),
    modes (array of {omega, c} tables).

    [preset] keys: type = "spherical_cavity", g, R, N,
    convention = "paper" | "linear".
    """
    with open(path, "rb") as handle:
        data = tomllib.load(handle)

    unknown = set(data) - {"model", "preset"}
    if unknown:
        raise InvalidParameterError(f"unknown config tables: {sorted(unknown)}")
    if ("model" in data) == ("preset" in data):
        raise InvalidParameterError(
            "config must contain exactly one of [model] or [preset]"
        )

    if "model" in data:
        table = data["model"]
        _check_keys(table, _MODEL_KEYS, "model")
        if "omega0" not in table or "modes" not in table:
            raise InvalidParameterError("[model] requires omega0 and modes")
        modes = []
        for i, entry in enumerate(_as_list(table["modes"], "model.modes"), start=1):
            if not isinstance(entry, dict) or set(entry) != {"omega", "c"}:
                raise InvalidParameterError(
                    f"model.modes[{i}] must be a table with keys omega and c"
                )
            modes.append(Mode(_as_number(entry["omega"], f"model.modes[{i}].omega"),
                              _as_number(entry["c"], f"model.modes[{i}].c")))
        return ModelConfig(
            omega0=_as_number(table["omega0"], "model.omega0"),
            modes=tuple(modes),
            hbar=_as_number(table.get("hbar", 1.0), "model.hbar"),
        )

    table = data["preset"]
    _check_keys(table, _PRESET_KEYS, "preset")
    missing = _PRESET_KEYS - set(table)
    if missing:
        raise InvalidParameterError(f"[preset] missing keys: {sorted(missing)}")
    if table["type"] != "spherical_cavity":
        raise InvalidParameterError(
            f"preset.type must be 'spherical_cavity', got {table['type']!r}"
        )
    try:
        convention = FrequencyConvention(table["convention"])
    except ValueError:
        raise InvalidParameterError(
            f"preset.convention must be 'paper' or 'linear', got {table['convention']!r}"
        ) from None
    n = table["N"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidParameterError(f"preset.N must be an integer, got {n!r}")
    preset = SphericalCavityPreset(
        g=_as_number(table["g"], "preset.g"),
        R=_as_number(table["R"], "preset.R"),
        N=n,
        frequency_convention=convention,
    )
    return build_config_from_preset(preset)


def _check_keys(table: dict, allowed: set, name: str) -> None:
    if not isinstance(table, dict):
        raise InvalidParameterError(f"[{name}] must be a table")
    unknown = set(table) - allowed
    if unknown:
        raise InvalidParameterError(f"unknown [{name}] keys: {sorted(unknown)}")


def _as_list(value, name: str) -> list:
    if not isinstance(value, list) or not value:
        raise InvalidParameterError(f"{name} must be a non-empty array")
    return value


def _as_number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameterError(f"{name} must be a number, got {value!r}")
    return float(value)
