"""Seeded experiments: the max/min norm-gap study on random unitary
coefficients and the convergence study for growing embedding samples.

Reports are plain dictionaries wrapped in ``ExperimentReport``; every
reported norm carries its witness so it can be re-certified after a
round-trip through JSON. Wall-clock time lives in its own field so that
reports are otherwise byte-reproducible for a fixed seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import CertificationError, DimensionError, DomainError
from .linalg import haar_unitary, seed_sequence
from .measures import MatrixMeasure, NormEstimate, UnitaryTuple
from .norms import (
    certify,
    evaluate_phase_witness,
    evaluate_unitary_witness,
    maxl1_level_norm,
    min_level_norm,
    pisier_bound,
    sd_norm,
    tmu_apply,
)
from .embedding import tuple_stream
from .optimize import OptimizerConfig
from .serialization import complex_pairs, matrix_from_pairs, measure_from_doc, measure_to_doc

SURROGATE_DISCLAIMER = (
    "ratios compare the unitary-tuple and phase-vector suprema through the "
    "identity map on the sampled coefficients; they are computable "
    "surrogates, not infima over all complete isomorphisms"
)

CSV_HEADER = "trial,n,p,level,min_norm,max_norm,ratio,entangled_floor,seed"


@dataclass
class ExperimentReport:
    """Machine-readable experiment record."""

    experiment: str
    params: dict
    trials: list
    summary: dict
    pisier_bound: float | None
    surrogate_disclaimer: str
    wall_clock_s: float

    def to_doc(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "trials": self.trials,
            "summary": self.summary,
            "pisier_bound": self.pisier_bound,
            "surrogate_disclaimer": self.surrogate_disclaimer,
            "wall_clock_s": self.wall_clock_s,
        }

    def to_csv(self) -> str:
        if self.experiment == "cb-gap":
            lines = [CSV_HEADER]
            for t in self.trials:
                lines.append(
                    f"{t['trial']},{self.params['n']},{self.params['p']},{self.params['level']},"
                    f"{t['min_norm']['value']!r},{t['max_norm']['value']!r},{t['ratio']!r},"
                    f"{t['entangled_floor']!r},{self.params['seed']}"
                )
        else:
            lines = ["stage,sample_size,truncated_norm,reference_norm,gap,seed"]
            for t in self.trials:
                lines.append(
                    f"{t['stage']},{t['sample_size']},{t['truncated_norm']['value']!r},"
                    f"{self.summary['reference_norm']!r},{t['gap']!r},{self.params['seed']}"
                )
        return "\n".join(lines) + "\n"


def _tuple_witness_doc(witness: UnitaryTuple) -> dict:
    return {
        "kind": "unitary_tuple",
        "n": witness.n,
        "m": witness.m,
        "blocks": [complex_pairs(b) for b in witness.blocks],
    }


def _phase_witness_doc(phases: np.ndarray) -> dict:
    return {"kind": "phases", "m": int(phases.shape[0]), "values": complex_pairs(phases.reshape(1, -1))}


def witness_from_doc(doc: dict):
    """Rebuild a serialized witness (unitary tuple or phase vector)."""
    kind = doc.get("kind")
    if kind == "unitary_tuple":
        n, m = int(doc["n"]), int(doc["m"])
        blocks = np.stack([matrix_from_pairs(b, n, n, "witness block") for b in doc["blocks"]])
        return UnitaryTuple(blocks)
    if kind == "phases":
        m = int(doc["m"])
        return matrix_from_pairs(doc["values"], 1, m, "witness phases").reshape(m)
    raise DimensionError(f"unknown witness kind {kind!r}")


def estimate_doc(estimate: NormEstimate) -> dict:
    witness = estimate.witness
    if isinstance(witness, UnitaryTuple):
        wdoc = _tuple_witness_doc(witness)
    else:
        wdoc = _phase_witness_doc(np.asarray(witness))
    return {
        "value": estimate.value,
        "level": estimate.level,
        "restarts_used": estimate.restarts_used,
        "converged": estimate.converged,
        "witness": wdoc,
    }


def entangled_adversary(mu: MatrixMeasure, level: int) -> UnitaryTuple:
    """Adversary tuple of entrywise-conjugate coefficient blocks.

    Requires unitary coefficients. For ``level`` a multiple of p the
    conjugate blocks are repeated block-diagonally; a remainder is padded
    with an identity corner, which keeps every block unitary while the
    leading diagonal blocks still carry the entangled value.
    """
    p = mu.p
    if level < p:
        raise DimensionError(f"adversary needs level >= p, got level={level}, p={p}")
    repeats, rest = divmod(level, p)
    blocks = []
    for c in mu.coeffs:
        core = np.kron(np.eye(repeats, dtype=complex), c.conj())
        if rest:
            block = np.zeros((level, level), dtype=complex)
            block[: repeats * p, : repeats * p] = core
            block[repeats * p :, repeats * p :] = np.eye(rest, dtype=complex)
        else:
            block = core
        blocks.append(block)
    return UnitaryTuple(np.stack(blocks))


def entangled_floor_value(mu: MatrixMeasure) -> float:
    """Certified lower bound <eta, M eta> with eta maximally entangled.

    For unitary p x p coefficients w_j, each Kronecker term
    conj(w_j) (x) w_j fixes eta = p^{-1/2} sum_i e_i (x) e_i, so the
    value equals the number of points m without any optimization.
    """
    p = mu.p
    eta = np.eye(p, dtype=complex).reshape(p * p) / np.sqrt(p)
    matrix = tmu_apply(mu, entangled_adversary(mu, p))
    return float(np.real(np.vdot(eta, matrix @ eta)))


def cb_gap_experiment(
    n: int,
    p: int,
    trials: int,
    level: int,
    cfg: OptimizerConfig | None = None,
    seed=0,
) -> ExperimentReport:
    """Gap between the unitary-tuple and phase suprema on Haar witnesses.

    Each trial draws a measure on n points whose coefficients are
    independent Haar unitaries in dimension p, estimates the phase
    supremum and the level-``level`` unitary supremum, and records their
    ratio together with the optimization-free entangled floor.
    """
    if n < 2:
        raise DomainError(f"the gap experiment needs n >= 2, got {n}")
    if p < 1 or trials < 1 or level < 1:
        raise DomainError("p, trials, and level must be positive")
    cfg = cfg or OptimizerConfig()
    started = time.perf_counter()
    records = []
    ratios = []
    min_values = []
    max_values = []
    for trial, child in enumerate(seed_sequence(seed).spawn(trials)):
        draw_seed, min_seed, max_seed = child.spawn(3)
        rng = np.random.default_rng(draw_seed)
        mu = MatrixMeasure(np.stack([haar_unitary(p, rng) for _ in range(n)]))
        min_est = min_level_norm(mu, cfg, min_seed)
        extra = [entangled_adversary(mu, level)] if level >= p else []
        max_est = maxl1_level_norm(mu, level, cfg, max_seed, extra_starts=extra)
        floor = entangled_floor_value(mu)
        certify(mu, min_est)
        certify(mu, max_est)
        if min_est.value <= 0.0:
            raise CertificationError("phase supremum estimate is not positive")
        ratio = max_est.value / min_est.value
        records.append(
            {
                "trial": trial,
                "measure": measure_to_doc(mu),
                "min_norm": estimate_doc(min_est),
                "max_norm": estimate_doc(max_est),
                "ratio": ratio,
                "entangled_floor": floor,
            }
        )
        ratios.append(ratio)
        min_values.append(min_est.value)
        max_values.append(max_est.value)
    summary = {
        "max_ratio": max(ratios),
        "mean_ratio": float(np.mean(ratios)),
        "mean_min_norm": float(np.mean(min_values)),
        "mean_max_norm": float(np.mean(max_values)),
    }
    return ExperimentReport(
        experiment="cb-gap",
        params={
            "n": n,
            "p": p,
            "m": n,
            "level": level,
            "trials": trials,
            "restarts": cfg.restarts,
            "max_iters": cfg.max_iters,
            "seed": int(seed) if not isinstance(seed, np.random.SeedSequence) else None,
        },
        trials=records,
        summary=summary,
        pisier_bound=pisier_bound(n),
        surrogate_disclaimer=SURROGATE_DISCLAIMER,
        wall_clock_s=time.perf_counter() - started,
    )


def embedding_convergence_experiment(
    m: int,
    p: int,
    schedule,
    cfg: OptimizerConfig | None = None,
    seed=0,
) -> ExperimentReport:
    """Track the truncated embedding norm along a growing tuple sample.

    ``schedule`` lists strictly increasing sample sizes; each stage uses
    the corresponding prefix of a deterministic tuple stream. The
    reference value is the level supremum estimate seeded with the
    stream's own tuples, so the truncated values can never exceed it.
    """
    schedule = [int(s) for s in schedule]
    if not schedule:
        raise DomainError("schedule must be nonempty")
    if any(s < 1 for s in schedule) or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError("schedule must be strictly increasing and positive")
    cfg = cfg or OptimizerConfig()
    started = time.perf_counter()
    measure_seed, stream_seed, opt_seed = seed_sequence(seed).spawn(3)
    rng = np.random.default_rng(measure_seed)
    coeffs = (rng.standard_normal((m, p, p)) + 1j * rng.standard_normal((m, p, p))) / np.sqrt(2.0 * p)
    mu = MatrixMeasure(coeffs)
    stream = tuple_stream(m, schedule[-1], stream_seed)
    reference = sd_norm(mu, max(u.n for u in stream), cfg, opt_seed, extra_starts=stream)
    certify(mu, reference)
    item_values = [evaluate_unitary_witness(mu, u) for u in stream]
    records = []
    previous = -np.inf
    for stage, size in enumerate(schedule):
        best_index = int(np.argmax(item_values[:size]))
        value = item_values[best_index]
        if value < previous - 1e-12:
            raise CertificationError("truncated norm decreased along a growing sample")
        previous = value
        records.append(
            {
                "stage": stage,
                "sample_size": size,
                "truncated_norm": {
                    "value": value,
                    "witness": _tuple_witness_doc(stream[best_index]),
                },
                "gap": reference.value - value,
            }
        )
    summary = {
        "reference_norm": reference.value,
        "reference_level": reference.level,
        "reference_witness": _tuple_witness_doc(reference.witness),
        "final_gap": records[-1]["gap"],
        "final_gap_fraction": records[-1]["gap"] / max(reference.value, 1e-30),
        "measure": measure_to_doc(mu),
    }
    return ExperimentReport(
        experiment="embedding-convergence",
        params={
            "m": m,
            "p": p,
            "schedule": schedule,
            "restarts": cfg.restarts,
            "max_iters": cfg.max_iters,
            "seed": int(seed) if not isinstance(seed, np.random.SeedSequence) else None,
        },
        trials=records,
        summary=summary,
        pisier_bound=None,
        surrogate_disclaimer=SURROGATE_DISCLAIMER,
        wall_clock_s=time.perf_counter() - started,
    )


def recertify_report(report_doc: dict, tol: float = 1e-9) -> int:
    """Re-evaluate every normed witness in a (deserialized) report.

    Returns the number of values checked; raises CertificationError when
    any value does not reproduce within ``tol``.
    """
    checked = 0
    if report_doc["experiment"] == "cb-gap":
        for t in report_doc["trials"]:
            mu = measure_from_doc(t["measure"])
            for key in ("min_norm", "max_norm"):
                rec = t[key]
                witness = witness_from_doc(rec["witness"])
                if isinstance(witness, UnitaryTuple):
                    value = evaluate_unitary_witness(mu, witness)
                else:
                    value = evaluate_phase_witness(mu, witness)
                if abs(value - rec["value"]) > tol:
                    raise CertificationError(
                        f"trial {t['trial']} {key} re-evaluates to {value!r}, recorded {rec['value']!r}"
                    )
                checked += 1
    else:
        mu = measure_from_doc(report_doc["summary"]["measure"])
        ref = report_doc["summary"]
        witness = witness_from_doc(ref["reference_witness"])
        if abs(evaluate_unitary_witness(mu, witness) - ref["reference_norm"]) > tol:
            raise CertificationError("reference norm does not re-certify")
        checked += 1
        for t in report_doc["trials"]:
            rec = t["truncated_norm"]
            witness = witness_from_doc(rec["witness"])
            if abs(evaluate_unitary_witness(mu, witness) - rec["value"]) > tol:
                raise CertificationError(f"stage {t['stage']} norm does not re-certify")
            checked += 1
    return checked
