"""Monotone ascent engines over products of unitary groups, tori, and
contraction balls.

Every engine runs projected (or parametrized) gradient ascent with a
backtracking line search that only accepts strict improvement, so the
objective trace is nondecreasing by construction. Engines are pure:
the same start, objective, and config reproduce the same trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .measures import UnitaryTuple

_MIN_STEP = 1e-14
_FLAT_GRADIENT = 1e-13


@dataclass
class OptimizerConfig:
    """Knobs shared by the norm estimators and ascent engines."""

    restarts: int = 16
    max_iters: int = 500
    step_size: float = 0.1  # halved during line search on non-improvement
    convergence_tol: float = 1e-8

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise PreconditionError("restarts and max_iters must be positive")
        if self.step_size <= 0.0 or self.convergence_tol <= 0.0:
            raise PreconditionError("step_size and convergence_tol must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerConfig":
        allowed = {"restarts", "max_iters", "step_size", "convergence_tol"}
        unknown = set(data) - allowed
        if unknown:
            raise PreconditionError(f"unknown optimizer config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class AscentTrace:
    """Objective values per accepted iterate, final point, convergence flag."""

    values: list[float]
    final: object
    converged: bool

    def __post_init__(self):
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise PreconditionError("ascent trace is not nondecreasing")


def _run_ascent(objective, x0, cfg: OptimizerConfig, project, retract):
    value, grad = objective(x0)
    value = float(value)
    values = [value]
    x = x0
    step = cfg.step_size
    converged = False
    for _ in range(cfg.max_iters):
        direction = project(x, grad)
        dnorm = float(np.sqrt(np.sum(np.abs(direction) ** 2)))
        if dnorm <= _FLAT_GRADIENT * max(1.0, abs(value)):
            converged = True
            break
        accepted = None
        trial = step
        while trial >= _MIN_STEP:
            cand = retract(x, trial * direction)
            cand_value, cand_grad = objective(cand)
            cand_value = float(cand_value)
            if cand_value > value:
                accepted = (cand, cand_value, cand_grad, trial)
                break
            trial *= 0.5
        if accepted is None:
            # no improving step at any admissible length: local maximum
            converged = True
            break
        x, new_value, grad, used = accepted
        step = min(cfg.step_size, 2.0 * used)
        gain = (new_value - value) / max(abs(new_value), abs(value), 1e-12)
        value = new_value
        values.append(value)
        if gain < cfg.convergence_tol:
            converged = True
            break
    return values, x, converged


def _adjoint(stack: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(stack, (0, 2, 1)))


def _polar(stack: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(stack)
    return u @ vh


def ascend_unitary_product(objective, start: UnitaryTuple, cfg: OptimizerConfig) -> AscentTrace:
    """Riemannian ascent over an m-fold product of unitary groups.

    ``objective(blocks)`` maps an (m, n, n) stack to (value, grad) where
    grad is the Euclidean gradient (df = Re <grad, d blocks>). The
    gradient is projected to the tangent space of each factor
    (u * skew(u^* g)) and steps are retracted by polar decomposition, so
    every iterate stays unitary to machine precision.
    """
    if not isinstance(start, UnitaryTuple):
        raise PreconditionError("start must be a UnitaryTuple")

    def project(u, g):
        a = _adjoint(u) @ g
        return u @ (0.5 * (a - _adjoint(a)))

    def retract(u, xi):
        return _polar(u + xi)

    values, final, converged = _run_ascent(objective, start.blocks, cfg, project, retract)
    return AscentTrace(values, UnitaryTuple(final), converged)


def ascend_torus(objective, start, cfg: OptimizerConfig) -> AscentTrace:
    """Gradient ascent over a torus of phases.

    ``start`` is a vector of unimodular complex numbers. ``objective(z)``
    maps a phase vector to (value, grad) with grad taken with respect to
    the phase angles. Iterates are parametrized by angles, so they stay
    exactly unimodular. The final point is a phase vector.
    """
    z0 = np.asarray(start, dtype=complex)
    if z0.ndim != 1 or z0.size < 1:
        raise PreconditionError("start must be a nonempty phase vector")
    mags = np.abs(z0)
    if np.any(mags == 0.0):
        raise PreconditionError("start contains a zero-modulus entry")
    theta0 = np.angle(z0)

    def angle_objective(theta):
        return objective(np.exp(1j * theta))

    values, final_theta, converged = _run_ascent(
        angle_objective, theta0, cfg, lambda x, g: g, lambda x, d: x + d
    )
    return AscentTrace(values, np.exp(1j * final_theta), converged)


def ascend_ball(objective, start, cfg: OptimizerConfig) -> AscentTrace:
    """Euclidean ascent over m-tuples of n x n contractions.

    Steps are retracted by clipping singular values to [0, 1], so every
    iterate remains a tuple of contractions.
    """
    v0 = np.asarray(start, dtype=complex)
    if v0.ndim != 3 or v0.shape[1] != v0.shape[2]:
        raise PreconditionError(f"start must be an (m, n, n) stack, got shape {v0.shape}")
    norms = np.linalg.svd(v0, compute_uv=False)[:, 0]
    if np.any(norms > 1.0 + 1e-10):
        raise PreconditionError("start blocks are not contractions within 1e-10")

    def retract(v, xi):
        u, s, vh = np.linalg.svd(v + xi)
        return (u * np.minimum(s, 1.0)[..., None, :]) @ vh

    values, final, converged = _run_ascent(objective, v0, cfg, lambda x, g: g, retract)
    return AscentTrace(values, final, converged)
