"""Unitarization devices: the 2x2 block unitary dilation of a contraction
and the decomposition of an arbitrary matrix as a combination of four
unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotContractionError
from .linalg import ALGEBRA_TOL, CONSTRUCTOR_TOL, as_matrix, operator_norm, psd_sqrt

CONTRACTION_SLACK = 1e-10


@dataclass(frozen=True)
class Dilation:
    """A contraction together with its 2n x 2n block unitary dilation."""

    source: np.ndarray
    result: np.ndarray

    def __post_init__(self):
        n = self.source.shape[0]
        if operator_norm(self.source) > 1.0 + CONTRACTION_SLACK:
            raise NotContractionError("dilation source is not a contraction")
        resid = operator_norm(self.result.conj().T @ self.result - np.eye(2 * n))
        if resid > ALGEBRA_TOL:
            raise NotContractionError(f"dilation result is not unitary (residual {resid:.3e})")
        if not np.array_equal(self.result[:n, n:], self.source):
            raise DimensionError("dilation (1,2) block does not equal the source")


def dilate(a) -> Dilation:
    """Embed a contraction as the (1,2) block of a 2n x 2n unitary.

    The result is [[d_left, a], [-a*, d_right]] with d_left, d_right the
    positive square roots of the two defect operators 1 - a a* and
    1 - a* a. Norms in (1, 1 + 1e-10] are rescaled to exactly 1; larger
    norms are rejected. The defects are computed from the singular value
    decomposition of ``a`` so the block matrix stays unitary to machine
    precision even when ``a`` is itself (numerically) unitary.
    """
    arr = as_matrix(a, "contraction")
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"dilate needs a square matrix, got {arr.shape}")
    nrm = operator_norm(arr)
    if nrm > 1.0 + CONTRACTION_SLACK:
        raise NotContractionError(f"matrix has norm {nrm:.12f} > 1 + 1e-10")
    if nrm > 1.0:
        arr = arr / nrm
    n = arr.shape[0]
    u, s, vh = np.linalg.svd(arr)
    s = np.minimum(s, 1.0)
    c = np.sqrt(np.clip(1.0 - s * s, 0.0, None))
    left_defect = (u * c) @ u.conj().T
    right_defect = (vh.conj().T * c) @ vh
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = left_defect
    out[:n, n:] = arr
    out[n:, :n] = -arr.conj().T
    out[n:, n:] = right_defect
    return Dilation(source=arr, result=out)


def dilate_blocks(blocks) -> np.ndarray:
    """Dilate each n x n block of an (m, n, n) stack to a (m, 2n, 2n) stack."""
    arr = np.asarray(blocks, dtype=complex)
    if arr.ndim != 3:
        raise DimensionError(f"expected a stack of square blocks, got shape {arr.shape}")
    return np.stack([dilate(block).result for block in arr])


def compress_12(u) -> np.ndarray:
    """Top-right n x n block of a 2n x 2n matrix."""
    arr = as_matrix(u, "compress_12 argument")
    rows, cols = arr.shape
    if rows != cols or rows % 2 != 0:
        raise DimensionError(f"compress_12 needs an even square matrix, got {arr.shape}")
    n = rows // 2
    return arr[:n, n:].copy()


def four_unitaries(a) -> list[tuple[complex, np.ndarray]]:
    """Write ``a`` as a combination of four unitaries.

    Returns four (coefficient, unitary) pairs with sum(c_k u_k) = a and
    sum |c_k| <= 2 ||a||. The Hermitian real and imaginary parts of ``a``
    are each scaled to a contraction h and split as (w + w*)/2 with
    w = h + i (1 - h^2)^{1/2} unitary. A zero matrix yields four zero
    coefficients; a unitary input short-circuits to a single term.
    """
    arr = as_matrix(a, "four_unitaries argument")
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"four_unitaries needs a square matrix, got {arr.shape}")
    n = arr.shape[0]
    eye = np.eye(n, dtype=complex)
    nrm = operator_norm(arr)
    if nrm == 0.0:
        return [(0j, eye.copy()) for _ in range(4)]
    if operator_norm(arr.conj().T @ arr - eye) <= CONSTRUCTOR_TOL:
        return [(1.0 + 0j, arr.copy()), (0j, eye.copy()), (0j, eye.copy()), (0j, eye.copy())]
    herm = 0.5 * (arr + arr.conj().T)
    anti = (arr - arr.conj().T) / 2j
    terms: list[tuple[complex, np.ndarray]] = []
    for part, direction in ((herm, 1.0 + 0j), (anti, 1j)):
        r = operator_norm(part)
        if r <= 1e-14 * max(1.0, nrm):
            terms.append((0j, eye.copy()))
            terms.append((0j, eye.copy()))
            continue
        h = part / r
        w = h + 1j * psd_sqrt(eye - h @ h)
        terms.append((direction * r / 2.0, w))
        terms.append((direction * r / 2.0, w.conj().T))
    return terms
