"""Orthogonal diagonalization of the interaction matrix and matrix powers.

The decomposition convention, fixed once here and used everywhere:

    interaction = transform @ diag(frequencies**2) @ transform.T

i.e. the columns of `transform` are eigenvectors and `frequencies` holds
the positive normal-mode frequencies in ascending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergenceError, NonPositiveSpectrumError
from .model import CouplingMatrix

__all__ = ["NormalModeBasis", "diagonalize", "matrix_power", "stability_margin"]

# Off-diagonal Frobenius target relative to the input's Frobenius norm.
_OFF_TOL = 1e-14
# An eigenvalue at or below this fraction of the largest magnitude one is
# treated as non-positive (scale-invariant positivity threshold).
_POSITIVITY_TOL = 1e-12
# Sweep budget per matrix dimension.
_SWEEP_FACTOR = 30


@dataclass(frozen=True, eq=False)
class NormalModeBasis:
    """Reusable eigendecomposition of an interaction matrix.

    Attributes:
        transform: real orthogonal matrix, columns are eigenvectors.  Sign
            convention: in each column the entry of largest magnitude is
            positive (first such entry on ties).
        frequencies: positive normal-mode frequencies, ascending; their
            squares are the eigenvalues of the interaction matrix.
    """

    transform: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.transform, dtype=float)
        f = np.asarray(self.frequencies, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or f.shape != (t.shape[0],):
            raise ValueError(
                f"inconsistent shapes: transform {t.shape}, frequencies {f.shape}"
            )
        t = t.copy()
        f = f.copy()
        t.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "transform", t)
        object.__setattr__(self, "frequencies", f)

    @property
    def dim(self) -> int:
        return self.frequencies.shape[0]


def diagonalize(matrix: CouplingMatrix) -> NormalModeBasis:
    """Diagonalize an interaction matrix by cyclic Jacobi rotations.

    Deterministic: identical inputs produce bit-identical output.  Sweeps
    run in fixed row-major pivot order until the off-diagonal Frobenius
    norm drops to 1e-14 times the input's Frobenius norm.

    Raises:
        NonPositiveSpectrumError: an eigenvalue is at or below
            1e-12 * max(|eigenvalues|); the model is over-coupled.
        NoConvergenceError: the target was not reached within
            30 * dim sweeps (not expected for valid inputs).
    """
    a = np.array(matrix.entries, dtype=float)
    dim = a.shape[0]
    target = _OFF_TOL * float(np.linalg.norm(matrix.entries, "fro"))
    # If every pivot is below target/dim the off-diagonal norm is already
    # below target, so smaller pivots are never worth rotating.
    pivot_floor = target / dim
    vectors = np.eye(dim)
    upper = np.triu_indices(dim, 1)

    for _ in range(_SWEEP_FACTOR * dim):
        if _off_norm(a) <= target:
            break
        rows, cols = upper[0], upper[1]
        live = np.abs(a[upper]) > pivot_floor
        for p, q in zip(rows[live], cols[live]):
            _rotate(a, vectors, int(p), int(q), pivot_floor)
    else:
        if _off_norm(a) > target:
            raise NoConvergenceError(
                f"off-diagonal norm {_off_norm(a):.3e} above target {target:.3e} "
                f"after {_SWEEP_FACTOR * dim} sweeps"
            )

    eigenvalues = np.diag(a).copy()
    top = float(np.max(np.abs(eigenvalues)))
    if float(np.min(eigenvalues)) <= _POSITIVITY_TOL * top:
        raise NonPositiveSpectrumError(
            f"smallest eigenvalue {np.min(eigenvalues):.6e} is not positive "
            f"relative to the largest ({top:.6e}); the model is over-coupled"
        )

    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]
    for j in range(dim):
        lead = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[lead, j] < 0.0:
            vectors[:, j] = -vectors[:, j]

    return NormalModeBasis(transform=vectors, frequencies=np.sqrt(eigenvalues))


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off, "fro"))


def _rotate(a: np.ndarray, vectors: np.ndarray, p: int, q: int, floor: float) -> None:
    apq = a[p, q]
    if abs(apq) <= floor:
        return
    app = a[p, p]
    aqq = a[q, q]
    tau = (aqq - app) / (2.0 * apq)
    if tau == 0.0:
        t = 1.0
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    # Analytic updates of the rotated 2 x 2 block beat the generic ones.
    a[p, p] = app - t * apq
    a[q, q] = aqq + t * apq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vec_p = vectors[:, p].copy()
    vec_q = vectors[:, q].copy()
    vectors[:, p] = c * vec_p - s * vec_q
    vectors[:, q] = s * vec_p + c * vec_q


def matrix_power(basis: NormalModeBasis, alpha: float) -> np.ndarray:
    """Real power of the interaction matrix: transform @ D^(2 alpha) @ transform.T.

    alpha = 1 reconstructs the interaction matrix, alpha = 1/2 gives the
    frequency matrix, alpha = 1/4 its square root, alpha = -1/2 its inverse.
    """
    powered = basis.frequencies ** (2.0 * float(alpha))
    return (basis.transform * powered) @ basis.transform.T


def stability_margin(basis: NormalModeBasis) -> float:
    """Ratio of smallest to largest eigenvalue, a positivity diagnostic in (0, 1]."""
    low = float(basis.frequencies[0])
    high = float(basis.frequencies[-1])
    return (low * low) / (high * high)
