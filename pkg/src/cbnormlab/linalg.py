"""Dense complex linear algebra primitives.

Everything downstream is built on four operations: largest singular
value, Kronecker products, Haar-random unitaries, and positive
semidefinite square roots. All functions are pure; random sampling takes
an explicit seed, so parallel callers can derive independent sub-seeds
deterministically.
"""

from __future__ import annotations

import operator

import numpy as np

from .errors import DimensionError, DomainError, NotPSDError, PreconditionError

# Tolerance ladder: constructor-grade checks are tightest, algebraic
# identities one step looser, optimizer outputs looser still.
CONSTRUCTOR_TOL = 1e-12
ALGEBRA_TOL = 1e-9
HERMITIAN_TOL = 1e-10
EIGENVALUE_CLAMP = -1e-10

_SVD_DIM_LIMIT = 64
_POWER_TOL = 1e-12
_POWER_MAX_ITERS = 20000


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` as a nonempty, finite, dense 2-D complex array."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def seed_sequence(seed) -> np.random.SeedSequence:
    """Normalize an integer seed (or an existing SeedSequence) for splitting."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    value = operator.index(seed)
    if value < 0:
        raise DomainError(f"seed must be nonnegative, got {value}")
    return np.random.SeedSequence(value)


def generator(seed) -> np.random.Generator:
    """Random generator for ``seed``; passes through an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed_sequence(seed))


def operator_norm(a) -> float:
    """Largest singular value of ``a``.

    Full SVD up to dimension 64; power iteration on ``a* a`` with
    tolerance 1e-12 beyond that. Accurate to about 1e-10 relative.
    """
    arr = as_matrix(a, "operator_norm argument")
    if max(arr.shape) <= _SVD_DIM_LIMIT:
        return float(np.linalg.svd(arr, compute_uv=False)[0])
    return _power_iteration_norm(arr)


def _power_iteration_norm(a: np.ndarray) -> float:
    cols = a.shape[1]
    v = np.full(cols, 1.0 / np.sqrt(cols), dtype=complex)
    w = a @ v
    if np.linalg.norm(w) == 0.0:
        # the flat start vector can sit in the kernel; restart from the
        # heaviest column of a
        j = int(np.argmax(np.linalg.norm(a, axis=0)))
        v = np.zeros(cols, dtype=complex)
        v[j] = 1.0
        w = a @ v
        if np.linalg.norm(w) == 0.0:
            return 0.0
    s = float(np.linalg.norm(w))
    prev = 0.0
    stall = 0
    for _ in range(_POWER_MAX_ITERS):
        u = a.conj().T @ w
        nu = np.linalg.norm(u)
        if nu == 0.0:
            break
        v = u / nu
        w = a @ v
        s = float(np.linalg.norm(w))
        if abs(s - prev) <= _POWER_TOL * max(s, 1.0):
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0
        prev = s
    return s


def kronecker(a, b) -> np.ndarray:
    """Kronecker product, (a ⊗ b)[(i,k),(j,l)] = a[i,j] b[k,l]."""
    left = as_matrix(a, "kronecker left factor")
    right = as_matrix(b, "kronecker right factor")
    return np.kron(left, right)


def haar_unitary(n: int, seed=0) -> np.ndarray:
    """n x n unitary distributed by Haar measure.

    QR decomposition of a standard complex Gaussian matrix, with the
    column phases fixed so that the diagonal of R is positive; this is
    what makes the distribution uniform rather than QR-biased.
    """
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    rng = generator(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    mags = np.abs(d)
    phases = np.where(mags > 0.0, d / np.where(mags > 0.0, mags, 1.0), 1.0)
    return q * phases


def psd_sqrt(a) -> np.ndarray:
    """Positive semidefinite square root via spectral decomposition.

    ``a`` must be Hermitian within 1e-10 and have eigenvalues >= -1e-10;
    slightly negative eigenvalues (defect operators of contractions
    computed in floating point) are clamped to zero.
    """
    arr = as_matrix(a, "psd_sqrt argument")
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"psd_sqrt needs a square matrix, got {arr.shape}")
    if operator_norm(arr - arr.conj().T) > HERMITIAN_TOL:
        raise PreconditionError("matrix is not Hermitian within 1e-10")
    herm = 0.5 * (arr + arr.conj().T)
    eigvals, eigvecs = np.linalg.eigh(herm)
    if eigvals.min() < EIGENVALUE_CLAMP:
        raise NotPSDError(f"matrix has eigenvalue {eigvals.min():.3e} < -1e-10")
    eigvals = np.clip(eigvals, 0.0, None)
    root = (eigvecs * np.sqrt(eigvals)) @ eigvecs.conj().T
    return 0.5 * (root + root.conj().T)
