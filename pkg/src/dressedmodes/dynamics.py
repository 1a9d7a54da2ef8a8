"""Time evolution and transition amplitudes built on a normal-mode basis.

Everything here is a closed-form function of the eigendecomposition: the
unitary kernel J(t) with entries J[r, s] = sum_k T[r, k] T[s, k] e^(-i W_k t),
transition probabilities |J[r, s]|^2, multi-quanta amplitudes, the energy
spectrum, and the holomorphic transformation functions in the normal-mode
and single-component (dressed) descriptions.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidParameterError,
)
from .spectral import NormalModeBasis

__all__ = [
    "EvolutionKernel",
    "OccupationVector",
    "AmplitudeSample",
    "PhaseConvention",
    "kernel",
    "transition_probability",
    "survival_sum",
    "multiquanta_amplitude",
    "spectrum_energy",
    "vacuum_energy",
    "transformation_function_normal",
    "transformation_function_dressed",
    "number_overlap",
]

# Beyond this occupation the factorial leaves exact float territory and the
# overlap switches to log-gamma accumulation.
_DIRECT_FACTORIAL_LIMIT = 20


class PhaseConvention(enum.Enum):
    """Global phase attached to multi-quanta amplitudes.

    TOTAL: e^(-i TrD t / 2), the vacuum phase of all N+1 modes together.
    PER_PAIR: e^(-i TrD t / (2N)), splitting the same trace over the N
        field modes pair by pair.

    Probabilities do not depend on the choice.
    """

    TOTAL = "total"
    PER_PAIR = "paper"


@dataclass(frozen=True, eq=False)
class EvolutionKernel:
    """Unitary transition-amplitude matrix J(t), complex symmetric."""

    time: float
    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"kernel must be square, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "time", float(self.time))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class OccupationVector:
    """Quanta per normal mode, (n_0, ..., n_N), labelling one eigenstate."""

    quanta: tuple[int, ...]

    def __post_init__(self) -> None:
        cleaned = []
        for n in self.quanta:
            if int(n) != n or int(n) < 0:
                raise InvalidParameterError(
                    f"occupation numbers must be nonnegative integers, got {n!r}"
                )
            cleaned.append(int(n))
        object.__setattr__(self, "quanta", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.quanta)


@dataclass(frozen=True)
class AmplitudeSample:
    """One evaluated transition amplitude with its probability."""

    time: float
    r: int
    s: int
    n: int
    value: complex
    probability: float = field(init=False)

    def __post_init__(self) -> None:
        prob = self.value.real * self.value.real + self.value.imag * self.value.imag
        if not 0.0 <= prob <= 1.0 + 1e-10:
            raise InvalidParameterError(f"probability {prob} outside [0, 1]")
        object.__setattr__(self, "probability", prob)


def kernel(basis: NormalModeBasis, t: float) -> EvolutionKernel:
    """Evaluate J(t).

    Built as a sum of rank-one symmetric terms, so J[r, s] == J[s, r]
    bit-exactly.  Each call recomputes the phases from scratch; there is no
    incremental phase accumulation to drift over long time grids.
    """
    t = float(t)
    dim = basis.dim
    phases = np.exp(-1j * basis.frequencies * t)
    entries = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        column = basis.transform[:, k]
        entries += phases[k] * np.multiply.outer(column, column)
    return EvolutionKernel(time=t, entries=entries)


def transition_probability(basis: NormalModeBasis, r: int, s: int, t: float) -> float:
    """Probability |J[r, s](t)|^2 of finding one quantum moved from r to s."""
    _check_index(basis.dim, r)
    _check_index(basis.dim, s)
    value = kernel(basis, t).entries[r, s]
    return value.real * value.real + value.imag * value.imag


def survival_sum(basis: NormalModeBasis, s: int, t: float) -> float:
    """Sum over r of |J[r, s](t)|^2; equals 1 up to rounding (unitarity).

    Exposed so callers can report the numerical defect directly.
    """
    _check_index(basis.dim, s)
    column = kernel(basis, t).entries[:, s]
    return float(np.sum(column.real * column.real + column.imag * column.imag))


def multiquanta_amplitude(
    basis: NormalModeBasis,
    r: int,
    s: int,
    n: int,
    t: float,
    phase_convention: PhaseConvention = PhaseConvention.TOTAL,
) -> complex:
    """Amplitude for n quanta to move from component r to component s.

    Equals phase(t) * J[r, s](t)^n: the multinomial sum over per-mode
    occupations collapses to the direct n-th power of the kernel entry.
    """
    _check_index(basis.dim, r)
    _check_index(basis.dim, s)
    if n < 0:
        raise InvalidParameterError(f"quanta count must be >= 0, got {n}")
    trace = float(np.sum(basis.frequencies))
    if phase_convention is PhaseConvention.TOTAL:
        phase = cmath.exp(-0.5j * trace * t)
    else:
        phase = cmath.exp(-0.5j * trace * t / (basis.dim - 1))
    if n == 0:
        return phase
    entry = complex(kernel(basis, t).entries[r, s])
    if n == 1:
        return phase * entry
    return phase * entry**n


def spectrum_energy(
    basis: NormalModeBasis,
    occupation: OccupationVector | Sequence[int],
    hbar: float = 1.0,
) -> float:
    """Energy hbar * sum_k W_k n_k + (hbar / 2) * sum_k W_k of one eigenstate."""
    occ = occupation if isinstance(occupation, OccupationVector) else OccupationVector(tuple(occupation))
    if len(occ) != basis.dim:
        raise DimensionMismatchError(
            f"occupation length {len(occ)} does not match dimension {basis.dim}"
        )
    quanta = np.asarray(occ.quanta, dtype=float)
    return float(hbar * np.sum(basis.frequencies * quanta) + vacuum_energy(basis, hbar))


def vacuum_energy(basis: NormalModeBasis, hbar: float = 1.0) -> float:
    """Zero-point energy (hbar / 2) * sum_k W_k."""
    return float(0.5 * hbar * np.sum(basis.frequencies))


def transformation_function_normal(
    basis: NormalModeBasis,
    xi_dag: Sequence[complex],
    xi0: Sequence[complex],
    t: float,
) -> complex:
    """Holomorphic matrix element between normal-mode coherent labels.

    exp(-i TrD t / 2) * exp(sum_k xi_dag[k] * xi0[k] * e^(-i W_k t)).
    The labels are c-number eigenvalues; no conjugation is applied.
    """
    a = _as_vector(xi_dag, basis.dim, "xi_dag")
    b = _as_vector(xi0, basis.dim, "xi0")
    phases = np.exp(-1j * basis.frequencies * float(t))
    return _vacuum_phase(basis, t) * complex(np.exp(np.sum(a * b * phases)))


def transformation_function_dressed(
    basis: NormalModeBasis,
    y_dag: Sequence[complex],
    y0: Sequence[complex],
    t: float,
) -> complex:
    """Same matrix element between single-component (dressed) labels.

    exp(-i TrD t / 2) * exp(y_dag . J(t) . y0).  Substituting
    xi = transform.T @ y reduces it to the normal-mode form.
    """
    a = _as_vector(y_dag, basis.dim, "y_dag")
    b = _as_vector(y0, basis.dim, "y0")
    j = kernel(basis, t).entries
    return _vacuum_phase(basis, t) * complex(np.exp(a @ j @ b))


def number_overlap(xi: complex, n: int) -> complex:
    """Overlap xi^n / sqrt(n!) between a coherent label and the n-quanta state.

    Uses the exact factorial up to n = 20 and log-gamma accumulation
    beyond, which keeps the value finite far past the point where n!
    itself overflows.

    Raises:
        InvalidParameterError: n < 0.
        OverflowError: the overlap magnitude exceeds the double range.
    """
    if n < 0:
        raise InvalidParameterError(f"quanta count must be >= 0, got {n}")
    xi = complex(xi)
    if n <= _DIRECT_FACTORIAL_LIMIT:
        value = xi**n / math.sqrt(float(math.factorial(n)))
    elif xi == 0:
        return 0j
    else:
        value = cmath.exp(n * cmath.log(xi) - 0.5 * math.lgamma(n + 1))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"overlap magnitude overflows for |xi|={abs(xi)}, n={n}")
    return value


def _vacuum_phase(basis: NormalModeBasis, t: float) -> complex:
    return cmath.exp(-0.5j * float(np.sum(basis.frequencies)) * float(t))


def _check_index(dim: int, index: int) -> None:
    if not 0 <= index < dim:
        raise IndexOutOfRangeError(f"index {index} outside [0, {dim - 1}]")


def _as_vector(values: Sequence[complex], dim: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.shape != (dim,):
        raise DimensionMismatchError(
            f"{name} must have length {dim}, got shape {arr.shape}"
        )
    return arr
