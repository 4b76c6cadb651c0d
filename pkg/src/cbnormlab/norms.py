"""Matrix-level norms computed as suprema over tuples of unitaries,
phases, or contractions.

For a matrix measure with coefficients C_1..C_m and a tuple of n x n
unitaries u_1..u_m, the central evaluation is the Kronecker sum
sum_j u_j (x) C_j. Three families of lower estimates are exposed:

* ``maxl1_level_norm`` - sup over unitary tuples at a fixed level n,
* ``ball_level_norm``  - sup over tuples of contractions at level n,
* ``min_level_norm``   - sup over scalar phase vectors (the commutative
  structure; equivalently level 1).

``sd_norm`` takes the running maximum of the unitary estimates over
levels 1..n_max. All estimates are certified lower bounds: the reported
value is re-evaluated from the stored witness before it is returned.
"""

from __future__ import annotations

import math
import operator

import numpy as np

from .errors import CertificationError, DimensionError, DomainError
from .linalg import operator_norm, seed_sequence
from .measures import MatrixMeasure, NormEstimate, UnitaryTuple
from .optimize import OptimizerConfig, ascend_ball, ascend_torus, ascend_unitary_product

_DEGENERATE_GAP = 1e-8
_LEVEL_TIE_TOL = 1e-12
_GRID_DENSITY = 64
_GRID_POINT_LIMIT = 262_144  # largest reduced phase grid enumerated exhaustively


def tmu_apply(mu: MatrixMeasure, u: UnitaryTuple) -> np.ndarray:
    """Kronecker-sum evaluation sum_j u.blocks[j] (x) mu.coeffs[j]."""
    if mu.m != u.m:
        raise DimensionError(f"measure has {mu.m} points but tuple has {u.m}")
    return _kron_sum(u.blocks, mu.coeffs)


def _kron_sum(blocks: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    n = blocks.shape[-1]
    p = coeffs.shape[-1]
    out = np.einsum("jab,jkl->akbl", blocks, coeffs, optimize=True)
    return np.ascontiguousarray(out.reshape(n * p, n * p))


def _top_pairs(matrix: np.ndarray):
    """Leading singular value with its singular vector pairs.

    Near a degenerate top pair the gradient of the largest singular
    value is unreliable, so the two leading pairs are averaged as a
    subgradient surrogate; the reported value is always the true norm.
    """
    u, s, vh = np.linalg.svd(matrix)
    if s.size > 1 and s[0] - s[1] < _DEGENERATE_GAP:
        return float(s[0]), ((u[:, 0], vh[0].conj()), (u[:, 1], vh[1].conj())), 0.5
    return float(s[0]), ((u[:, 0], vh[0].conj()),), 1.0


def kron_sum_objective(coeffs):
    """Objective blocks -> (norm of the Kronecker sum, Euclidean gradient).

    The gradient of the largest singular value is rank one in the full
    matrix (outer product of the leading singular vectors) and is pulled
    back through the Kronecker sum to one n x n gradient per block.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    conj_coeffs = coeffs.conj()
    p = coeffs.shape[-1]

    def objective(blocks):
        n = blocks.shape[-1]
        value, pairs, weight = _top_pairs(_kron_sum(blocks, coeffs))
        grad = np.zeros_like(blocks)
        for x, y in pairs:
            left = x.reshape(n, p)
            right = y.reshape(n, p)
            grad += weight * np.einsum(
                "ak,jkl,bl->jab", left, conj_coeffs, right.conj(), optimize=True
            )
        return value, grad

    return objective


def phase_objective(coeffs):
    """Objective z -> (norm of sum_j z_j C_j, gradient in the phase angles)."""
    coeffs = np.asarray(coeffs, dtype=complex)

    def objective(z):
        value, pairs, weight = _top_pairs(np.tensordot(z, coeffs, axes=(0, 0)))
        grad = np.zeros(z.shape[0])
        for x, y in pairs:
            t = np.einsum("k,jkl,l->j", x.conj(), coeffs, y, optimize=True)
            grad += weight * np.real(1j * z * t)
        return value, grad

    return objective


def evaluate_unitary_witness(mu: MatrixMeasure, witness: UnitaryTuple) -> float:
    return operator_norm(tmu_apply(mu, witness))


def evaluate_phase_witness(mu: MatrixMeasure, phases) -> float:
    z = np.asarray(phases, dtype=complex)
    if z.shape != (mu.m,):
        raise DimensionError(f"phase witness has shape {z.shape}, expected ({mu.m},)")
    return operator_norm(np.tensordot(z, mu.coeffs, axes=(0, 0)))


def evaluate_contraction_witness(mu: MatrixMeasure, blocks) -> float:
    arr = np.asarray(blocks, dtype=complex)
    if arr.ndim != 3 or arr.shape[0] != mu.m:
        raise DimensionError(f"contraction witness has shape {arr.shape}, expected ({mu.m}, n, n)")
    return operator_norm(_kron_sum(arr, mu.coeffs))


def certify(mu: MatrixMeasure, estimate: NormEstimate, tol: float = 1e-9) -> float:
    """Re-evaluate an estimate from its witness; raise if it drifted."""
    witness = estimate.witness
    if isinstance(witness, UnitaryTuple):
        value = evaluate_unitary_witness(mu, witness)
    else:
        arr = np.asarray(witness)
        value = (
            evaluate_phase_witness(mu, arr) if arr.ndim == 1 else evaluate_contraction_witness(mu, arr)
        )
    if abs(value - estimate.value) > tol:
        raise CertificationError(
            f"witness re-evaluates to {value!r} but estimate records {estimate.value!r}"
        )
    return value


def _trace_phases(coeffs: np.ndarray) -> np.ndarray:
    traces = np.trace(coeffs, axis1=1, axis2=2)
    mags = np.abs(traces)
    return np.where(mags > 1e-14, np.conj(traces) / np.where(mags > 1e-14, mags, 1.0), 1.0)


def _deterministic_tuple_starts(mu: MatrixMeasure, n: int) -> list[UnitaryTuple]:
    # the identity tuple attains the triangle bound for positive scalar
    # measures; the trace-aligned diagonal tuple does so at p = 1
    return [
        UnitaryTuple.identity(n, mu.m),
        UnitaryTuple.scalar(_trace_phases(mu.coeffs), n),
    ]


def _best_trace(traces):
    best = traces[0]
    for trace in traces[1:]:
        if trace.values[-1] > best.values[-1]:
            best = trace
    return best


def maxl1_level_norm(
    mu: MatrixMeasure,
    n: int,
    cfg: OptimizerConfig | None = None,
    seed=0,
    extra_starts=(),
) -> NormEstimate:
    """Certified lower estimate of the level-n sup over unitary tuples.

    Runs ``cfg.restarts`` ascents from Haar-random tuples plus two
    deterministic starts (all-identity, trace-phase diagonal) and any
    caller-supplied ``extra_starts``, and keeps the best witness. The
    value is nondecreasing in ``cfg.restarts`` for a fixed seed.
    """
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    cfg = cfg or OptimizerConfig()
    objective = kron_sum_objective(mu.coeffs)
    starts = _deterministic_tuple_starts(mu, n)
    for child in seed_sequence(seed).spawn(cfg.restarts):
        starts.append(UnitaryTuple.haar(n, mu.m, child))
    for extra in extra_starts:
        if not isinstance(extra, UnitaryTuple) or extra.n != n or extra.m != mu.m:
            raise DimensionError("extra start does not match the requested level and point count")
        starts.append(extra)
    best = _best_trace([ascend_unitary_product(objective, start, cfg) for start in starts])
    witness = best.final
    return NormEstimate(
        value=evaluate_unitary_witness(mu, witness),
        witness=witness,
        level=n,
        restarts_used=len(starts),
        converged=best.converged,
    )


def _torus_grid_floor(coeffs: np.ndarray):
    """Best point of the exhaustive phase grid, exploiting the exact
    global-phase symmetry: the objective is invariant under a common
    phase and the grid points form a group, so the first phase can be
    pinned to 1 without changing the grid maximum."""
    m = coeffs.shape[0]
    roots = np.exp(2j * np.pi * np.arange(_GRID_DENSITY) / _GRID_DENSITY)
    if m == 1:
        combos = np.ones((1, 1), dtype=complex)
    else:
        mesh = np.stack(np.meshgrid(*([roots] * (m - 1)), indexing="ij"), axis=-1)
        tail = mesh.reshape(-1, m - 1)
        combos = np.concatenate([np.ones((tail.shape[0], 1), dtype=complex), tail], axis=1)
    best_value = -math.inf
    best_point = combos[0]
    chunk = 65_536
    for lo in range(0, combos.shape[0], chunk):
        batch = combos[lo : lo + chunk]
        tops = np.linalg.svd(np.tensordot(batch, coeffs, axes=(1, 0)), compute_uv=False)[:, 0]
        i = int(np.argmax(tops))
        if tops[i] > best_value:
            best_value = float(tops[i])
            best_point = batch[i]
    return best_point, best_value


def min_level_norm(mu: MatrixMeasure, cfg: OptimizerConfig | None = None, seed=0) -> NormEstimate:
    """Certified lower estimate of the sup over scalar phase vectors.

    Phase-gradient ascent from deterministic starts (all-ones and
    trace-aligned, the latter exact at p = 1) and ``cfg.restarts`` random
    starts; for small m the exhaustive 64-point-per-circle grid supplies
    a floor and its best point is polished by one further ascent.
    """
    cfg = cfg or OptimizerConfig()
    objective = phase_objective(mu.coeffs)
    starts = [np.ones(mu.m, dtype=complex), _trace_phases(mu.coeffs)]
    for child in seed_sequence(seed).spawn(cfg.restarts):
        rng = np.random.default_rng(child)
        starts.append(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, mu.m)))
    if _GRID_DENSITY ** (mu.m - 1) <= _GRID_POINT_LIMIT:
        grid_point, _ = _torus_grid_floor(mu.coeffs)
        starts.append(grid_point)
    best = _best_trace([ascend_torus(objective, start, cfg) for start in starts])
    witness = np.asarray(best.final)
    return NormEstimate(
        value=evaluate_phase_witness(mu, witness),
        witness=witness,
        level=1,
        restarts_used=len(starts),
        converged=best.converged,
    )


def ball_level_norm(
    mu: MatrixMeasure, n: int, cfg: OptimizerConfig | None = None, seed=0
) -> NormEstimate:
    """Certified lower estimate of the level-n sup over contraction tuples.

    The sup over the contraction ball equals the sup over unitary tuples
    (the norm is convex and unitaries are the extreme points), so the
    unitary estimate for the same seed is folded into the maximum
    alongside clipping-retraction ascents from Haar starting tuples.
    """
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    cfg = cfg or OptimizerConfig()
    unitary_estimate = maxl1_level_norm(mu, n, cfg, seed)
    objective = kron_sum_objective(mu.coeffs)
    traces = [
        ascend_ball(objective, UnitaryTuple.haar(n, mu.m, child).blocks, cfg)
        for child in seed_sequence(seed).spawn(cfg.restarts)
    ]
    best = _best_trace(traces)
    best_value = evaluate_contraction_witness(mu, best.final)
    if unitary_estimate.value >= best_value:
        witness = np.asarray(unitary_estimate.witness.blocks)
        value = unitary_estimate.value
        converged = unitary_estimate.converged
    else:
        witness = np.asarray(best.final)
        value = best_value
        converged = best.converged
    return NormEstimate(
        value=value,
        witness=witness,
        level=n,
        restarts_used=cfg.restarts + unitary_estimate.restarts_used,
        converged=converged,
    )


def sd_norm(
    mu: MatrixMeasure,
    n_max: int,
    cfg: OptimizerConfig | None = None,
    seed=0,
    extra_starts=(),
) -> NormEstimate:
    """Maximum of the unitary-tuple estimates over levels 1..n_max.

    Reports the smallest level achieving the maximum (ties resolved
    within 1e-12). ``extra_starts`` tuples are routed to the level they
    live at; tuples at levels above ``n_max`` are ignored. Nondecreasing
    in ``n_max`` for a fixed seed.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    best: NormEstimate | None = None
    for level, child in enumerate(seed_sequence(seed).spawn(n_max), start=1):
        extras = [u for u in extra_starts if u.n == level]
        estimate = maxl1_level_norm(mu, level, cfg, child, extra_starts=extras)
        if best is None or estimate.value > best.value + _LEVEL_TIE_TOL:
            best = estimate
    return best


def pisier_bound(n: int) -> float:
    """The exact lower-bound formula n / (2 sqrt(n - 1)) for n >= 2."""
    value = operator.index(n)
    if value <= 1:
        raise DomainError(f"the bound requires n >= 2, got {value}")
    return value / (2.0 * math.sqrt(value - 1.0))
