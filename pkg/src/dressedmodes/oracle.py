"""Independent brute-force validators for the spectral pipeline.

The propagator here integrates the coupled second-order equations of motion
directly from the interaction matrix with fixed-step RK4 and never touches
the eigensolver, so agreement with the spectral kernel certifies both code
paths.  The closed-form two-mode solution provides a second, fully analytic
cross-check for N = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    NonPositiveSpectrumError,
)
from .model import CouplingMatrix
from .spectral import NormalModeBasis, matrix_power

__all__ = [
    "PhaseSpacePropagator",
    "gershgorin_frequency_bound",
    "max_stable_dt",
    "accuracy_dt",
    "integrate_propagator",
    "symplectic_defect",
    "kernel_from_propagator",
    "analytic_two_mode",
]


@dataclass(frozen=True, eq=False)
class PhaseSpacePropagator:
    """Linear map (q(0), p(0)) -> (q(t), p(t)) of the classical flow.

    Stored as four (N+1) x (N+1) blocks:
    q(t) = qq @ q(0) + qp @ p(0),  p(t) = pq @ q(0) + pp @ p(0).
    """

    time: float
    qq: np.ndarray
    qp: np.ndarray
    pq: np.ndarray
    pp: np.ndarray

    def __post_init__(self) -> None:
        blocks = {}
        shape = None
        for name in ("qq", "qp", "pq", "pp"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            if shape is None:
                shape = arr.shape
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape != shape:
                raise DimensionMismatchError("propagator blocks must be equal square")
            arr.setflags(write=False)
            blocks[name] = arr
        for name, arr in blocks.items():
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "time", float(self.time))

    @property
    def dim(self) -> int:
        return self.qq.shape[0]


def gershgorin_frequency_bound(matrix: CouplingMatrix) -> float:
    """Upper bound on the largest normal-mode frequency from row sums."""
    largest = float(np.max(np.sum(np.abs(matrix.entries), axis=1)))
    return math.sqrt(largest)


def max_stable_dt(matrix: CouplingMatrix) -> float:
    """Largest admissible RK4 step: 1e-2 periods of the fastest bound."""
    return 1e-2 * 2.0 * math.pi / gershgorin_frequency_bound(matrix)


def accuracy_dt(matrix: CouplingMatrix, t: float, target: float = 1e-7) -> float:
    """RK4 step aiming at a propagator error below `target` at time t.

    The amplitude error of fixed-step RK4 on this linear system grows like
    t * w * (dt * w)^4 / 120 with w the fastest frequency; inverting that
    and capping by max_stable_dt keeps both the step-size precondition and
    the requested accuracy.
    """
    if target <= 0.0:
        raise InvalidParameterError(f"target must be > 0, got {target}")
    ceiling = max_stable_dt(matrix)
    if t <= 0.0:
        return ceiling
    bound = gershgorin_frequency_bound(matrix)
    return min(ceiling, (120.0 * target / (t * bound)) ** 0.25 / bound)


def integrate_propagator(
    matrix: CouplingMatrix, t: float, dt_max: float
) -> PhaseSpacePropagator:
    """Integrate d/dt (q, p) = (p, -M q) from the identity with fixed-step RK4.

    The step count is chosen so the final step lands exactly on t.  Callers
    must keep dt_max at or below max_stable_dt(matrix); this function only
    rejects outright invalid arguments.  This path never calls the
    eigensolver.

    Raises:
        InvalidParameterError: t < 0 or dt_max <= 0.
    """
    if t < 0.0:
        raise InvalidParameterError(f"t must be >= 0, got {t}")
    if dt_max <= 0.0:
        raise InvalidParameterError(f"dt_max must be > 0, got {dt_max}")
    n = matrix.dim
    generator = np.zeros((2 * n, 2 * n))
    generator[:n, n:] = np.eye(n)
    generator[n:, :n] = -matrix.entries
    state = np.eye(2 * n)
    steps = math.ceil(t / dt_max) if t > 0.0 else 0
    h = t / steps if steps else 0.0
    for _ in range(steps):
        k1 = generator @ state
        k2 = generator @ (state + 0.5 * h * k1)
        k3 = generator @ (state + 0.5 * h * k2)
        k4 = generator @ (state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return PhaseSpacePropagator(
        time=t,
        qq=state[:n, :n],
        qp=state[:n, n:],
        pq=state[n:, :n],
        pp=state[n:, n:],
    )


def symplectic_defect(propagator: PhaseSpacePropagator) -> float:
    """Max-norm violation of S.T @ W @ S = W for the canonical form W."""
    n = propagator.dim
    s = np.block([[propagator.qq, propagator.qp], [propagator.pq, propagator.pp]])
    canonical = np.zeros((2 * n, 2 * n))
    canonical[:n, n:] = np.eye(n)
    canonical[n:, :n] = -np.eye(n)
    return float(np.max(np.abs(s.T @ canonical @ s - canonical)))


def kernel_from_propagator(
    matrix: CouplingMatrix,
    basis: NormalModeBasis,
    propagator: PhaseSpacePropagator,
) -> np.ndarray:
    """Assemble the evolution kernel from integrated phase-space blocks.

    The dressing map sends (q, p) to y = sqrt(1/(2 hbar)) W^(1/2) (q + i W^(-1) p)
    with W the frequency matrix.  Pushing the propagated (q(t), p(t)) through
    that map and collecting the coefficient of y(0) gives

        J = 1/2 (W^(1/2) qq W^(-1/2) + W^(-1/2) pp W^(1/2))
          + i/2 (W^(-1/2) pq W^(-1/2) - W^(1/2) qp W^(1/2)),

    which reduces to cos(W t) - i sin(W t) for the exact flow.  The hbar
    factors cancel between the map and its inverse.  Only this final
    dressing step touches the eigendecomposition (through matrix_power).
    """
    if not (matrix.dim == basis.dim == propagator.dim):
        raise DimensionMismatchError(
            f"dimensions disagree: matrix {matrix.dim}, basis {basis.dim}, "
            f"propagator {propagator.dim}"
        )
    half = matrix_power(basis, 0.25)
    half_inv = matrix_power(basis, -0.25)
    real_part = half @ propagator.qq @ half_inv + half_inv @ propagator.pp @ half
    imag_part = half_inv @ propagator.pq @ half_inv - half @ propagator.qp @ half
    return 0.5 * real_part + 0.5j * imag_part


def analytic_two_mode(
    omega0: float, omega1: float, c1: float
) -> tuple[float, float, float]:
    """Closed-form normal modes of one oscillator coupled to one field mode.

    Returns (lower frequency, upper frequency, theta) where the squared
    frequencies are (w0^2 + w1^2)/2 -+ sqrt((w0^2 - w1^2)^2/4 + c1^2) and
    theta = atan2(2 c1, w1^2 - w0^2) / 2 is the rotation angle whose
    eigenvector columns are (cos theta, sin theta) and (-sin theta, cos theta).

    Raises:
        NonPositiveSpectrumError: the lower squared frequency is <= 0.
    """
    mean = 0.5 * (omega0 * omega0 + omega1 * omega1)
    radius = math.hypot(0.5 * (omega0 * omega0 - omega1 * omega1), c1)
    low = mean - radius
    if low <= 0.0:
        raise NonPositiveSpectrumError(
            f"lower squared frequency {low:.6e} is not positive"
        )
    theta = 0.5 * math.atan2(2.0 * c1, omega1 * omega1 - omega0 * omega0)
    return math.sqrt(low), math.sqrt(mean + radius), theta
