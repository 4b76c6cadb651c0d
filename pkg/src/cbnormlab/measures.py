"""Domain types: atomic measures on a finite point set, their matrix
levels, tuples of unitaries indexed by the points, and norm estimates.

An ``AtomicMeasure`` stores the m complex masses of a measure on m
points. A ``MatrixMeasure`` stores, for each point, a p x p coefficient
matrix; the scalar case is p = 1. A ``UnitaryTuple`` is an m-tuple of
n x n unitaries, i.e. a unitary-valued function on the point set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError
from .linalg import ALGEBRA_TOL, generator, haar_unitary


def _as_stack(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=complex)
    if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] != arr.shape[2] or arr.shape[1] < 1:
        raise DimensionError(f"{name} must have shape (m, k, k) with m, k >= 1, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class AtomicMeasure:
    """Complex measure on a finite point set, stored as its m masses."""

    atoms: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.atoms, dtype=complex)
        if arr.ndim != 1 or arr.size < 1:
            raise DimensionError(f"atoms must be a nonempty 1-D array, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("atoms contain non-finite entries")
        object.__setattr__(self, "atoms", arr)

    @property
    def m(self) -> int:
        return self.atoms.shape[0]

    @property
    def total_variation(self) -> float:
        return float(np.sum(np.abs(self.atoms)))

    @classmethod
    def point_mass(cls, m: int, index: int) -> "AtomicMeasure":
        """Unit mass at one point, zero elsewhere."""
        if not 0 <= index < m:
            raise DimensionError(f"point index {index} out of range for m={m}")
        atoms = np.zeros(m, dtype=complex)
        atoms[index] = 1.0
        return cls(atoms)

    def to_matrix_measure(self) -> "MatrixMeasure":
        return MatrixMeasure(self.atoms.reshape(self.m, 1, 1))


@dataclass(frozen=True)
class MatrixMeasure:
    """Matrix level of a measure: one p x p coefficient matrix per point."""

    coeffs: np.ndarray  # shape (m, p, p)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_stack(self.coeffs, "coeffs"))

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    @property
    def p(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def from_atoms(cls, atoms) -> "MatrixMeasure":
        return AtomicMeasure(np.asarray(atoms)).to_matrix_measure()


@dataclass(frozen=True)
class UnitaryTuple:
    """m-tuple of n x n unitaries; every block unitary within 1e-9."""

    blocks: np.ndarray  # shape (m, n, n)

    def __post_init__(self):
        arr = _as_stack(self.blocks, "blocks")
        eye = np.eye(arr.shape[1])
        resid = np.conj(np.transpose(arr, (0, 2, 1))) @ arr - eye
        worst = float(np.max(np.linalg.svd(resid, compute_uv=False)[:, 0]))
        if worst > ALGEBRA_TOL:
            raise PreconditionError(f"blocks are not unitary within 1e-9 (residual {worst:.3e})")
        object.__setattr__(self, "blocks", arr)

    @property
    def m(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[1]

    @classmethod
    def identity(cls, n: int, m: int) -> "UnitaryTuple":
        return cls(np.tile(np.eye(n, dtype=complex), (m, 1, 1)))

    @classmethod
    def haar(cls, n: int, m: int, seed=0) -> "UnitaryTuple":
        rng = generator(seed)
        return cls(np.stack([haar_unitary(n, rng) for _ in range(m)]))

    @classmethod
    def scalar(cls, phases, n: int) -> "UnitaryTuple":
        """Diagonal inflation of a phase vector: block j is phases[j] * I_n."""
        z = np.asarray(phases, dtype=complex)
        if z.ndim != 1 or z.size < 1:
            raise DimensionError("phases must be a nonempty 1-D array")
        return cls(z[:, None, None] * np.tile(np.eye(n, dtype=complex), (z.size, 1, 1)))


@dataclass
class NormEstimate:
    """Certified lower estimate of a supremum norm.

    ``value`` always equals the norm re-evaluated at ``witness``; the
    witness is a ``UnitaryTuple``, a phase vector, or a stack of
    contraction blocks depending on which estimator produced it.
    """

    value: float
    witness: object
    level: int
    restarts_used: int
    converged: bool
