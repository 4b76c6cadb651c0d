"""Finite truncations of the embedding of measures into a product of
matrix algebras.

An ``EmbeddingSample`` is a finite list of unitary tuples (with varying
block size n but a common point count m). Embedding a matrix measure
against the sample produces one Kronecker-sum block per tuple; point
masses land on the tuples' own blocks and are therefore exactly unitary.
The trace-class pairing and its scalar-valued pre-adjoint are provided,
together with coefficient functions of the block-diagonal product of the
sampled tuples and the elementary character-based embedding of scalar
measures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FormatError
from .linalg import operator_norm, seed_sequence
from .measures import AtomicMeasure, MatrixMeasure, UnitaryTuple
from .norms import tmu_apply
from .serialization import FORMAT_VERSION, complex_pairs, matrix_from_pairs

DEFAULT_LEVELS = (1, 2, 4)
DEFAULT_TUPLES_PER_LEVEL = 32


@dataclass(frozen=True)
class EmbeddingSample:
    """Ordered, finite family of unitary tuples sharing one point set.

    The item order is part of the persisted format: it fixes every
    pairing sum, so serialization round-trips are bit-reproducible.
    """

    items: tuple

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise DimensionError("embedding sample must contain at least one tuple")
        if any(not isinstance(u, UnitaryTuple) for u in items):
            raise DimensionError("embedding sample items must be UnitaryTuple instances")
        m = items[0].m
        if any(u.m != m for u in items):
            raise DimensionError("embedding sample items disagree on the number of points")
        object.__setattr__(self, "items", items)

    @property
    def m(self) -> int:
        return self.items[0].m

    @property
    def max_level(self) -> int:
        return max(u.n for u in self.items)

    def extend(self, more) -> "EmbeddingSample":
        return EmbeddingSample(self.items + tuple(more))

    def to_doc(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "m": self.m,
            "items": [
                {"n": u.n, "blocks": [complex_pairs(b) for b in u.blocks]} for u in self.items
            ],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "EmbeddingSample":
        if not isinstance(doc, dict):
            raise FormatError("sample document must be a JSON object")
        if doc.get("version") != FORMAT_VERSION:
            raise FormatError(f"sample document has unsupported version {doc.get('version')!r}")
        try:
            m = int(doc["m"])
            raw_items = doc["items"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed sample document: {exc}") from exc
        items = []
        for i, raw in enumerate(raw_items):
            try:
                n = int(raw["n"])
                raw_blocks = raw["blocks"]
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"malformed sample item {i}: {exc}") from exc
            if len(raw_blocks) != m:
                raise FormatError(f"sample item {i} has {len(raw_blocks)} blocks, expected {m}")
            blocks = np.stack(
                [matrix_from_pairs(b, n, n, f"item {i} block {k}") for k, b in enumerate(raw_blocks)]
            )
            items.append(UnitaryTuple(blocks))
        return cls(tuple(items))


@dataclass(frozen=True)
class BlockDiagonalOperator:
    """Image of a measure under a truncated embedding: one block per tuple."""

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(np.asarray(b, dtype=complex) for b in self.blocks))


@dataclass(frozen=True)
class TraceClassTuple:
    """Finite tuple of matrices paired against block-diagonal operators."""

    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(np.asarray(e, dtype=complex) for e in self.entries))

    @property
    def trace_norm_budget(self) -> float:
        return float(sum(np.sum(np.linalg.svd(e, compute_uv=False)) for e in self.entries))


def default_sample(m: int, seed=0, levels=DEFAULT_LEVELS, tuples_per_level=DEFAULT_TUPLES_PER_LEVEL):
    """Default truncation: per level, the all-identity tuple plus Haar draws.

    The identity tuple guarantees the total-variation floor for scalar
    measures with nonnegative masses.
    """
    items = []
    children = seed_sequence(seed).spawn(len(levels))
    for n, child in zip(levels, children):
        items.append(UnitaryTuple.identity(n, m))
        for grandchild in child.spawn(tuples_per_level):
            items.append(UnitaryTuple.haar(n, m, grandchild))
    return EmbeddingSample(tuple(items))


def tuple_stream(m: int, count: int, seed=0, levels=DEFAULT_LEVELS):
    """Deterministic stream of tuples: identities first, then Haar draws
    round-robin across the levels. Prefixes of the stream make growing
    samples for convergence studies."""
    if count < 1:
        raise DimensionError("stream length must be positive")
    items = [UnitaryTuple.identity(n, m) for n in levels][:count]
    children = iter(seed_sequence(seed).spawn(max(0, count - len(items))))
    while len(items) < count:
        for n in levels:
            if len(items) >= count:
                break
            items.append(UnitaryTuple.haar(n, m, next(children)))
    return items


def embed(sample: EmbeddingSample, mu: MatrixMeasure) -> BlockDiagonalOperator:
    """Evaluate the truncated embedding: one Kronecker-sum block per tuple."""
    if mu.m != sample.m:
        raise DimensionError(f"measure has {mu.m} points but sample has {sample.m}")
    return BlockDiagonalOperator(tuple(tmu_apply(mu, u) for u in sample.items))


def truncated_sd_norm(sample: EmbeddingSample, mu: MatrixMeasure) -> float:
    """Max block norm of the embedded measure; grows with the sample."""
    return max(operator_norm(b) for b in embed(sample, mu).blocks)


def _check_alignment(sample: EmbeddingSample, s: TraceClassTuple) -> None:
    if len(s.entries) != len(sample.items):
        raise DimensionError(
            f"trace-class tuple has {len(s.entries)} entries but sample has {len(sample.items)}"
        )
    for i, (entry, item) in enumerate(zip(s.entries, sample.items)):
        if entry.shape != (item.n, item.n):
            raise DimensionError(
                f"entry {i} has shape {entry.shape}, expected ({item.n}, {item.n})"
            )


def preadjoint(sample: EmbeddingSample, s: TraceClassTuple) -> np.ndarray:
    """Scalar function on the point set, h[k] = sum_i Tr(S_i u_i(k))."""
    _check_alignment(sample, s)
    m = sample.m
    values = np.zeros(m, dtype=complex)
    for entry, item in zip(s.entries, sample.items):
        values += np.trace(entry @ item.blocks, axis1=1, axis2=2)
    return values


def pairing(x: BlockDiagonalOperator, s: TraceClassTuple) -> complex:
    """Trace pairing sum_i Tr(S_i x_i)."""
    if len(s.entries) != len(x.blocks):
        raise DimensionError(
            f"trace-class tuple has {len(s.entries)} entries but operator has {len(x.blocks)}"
        )
    total = 0j
    for entry, block in zip(s.entries, x.blocks):
        if entry.shape != block.shape:
            raise DimensionError(f"entry shape {entry.shape} does not match block {block.shape}")
        total += np.trace(entry @ block)
    return complex(total)


def coefficient_function(sample: EmbeddingSample, xi, eta, points) -> np.ndarray:
    """Values <g_k xi, eta> of the block-diagonal product representation,
    where g_k = diag(u_1(k), ..., u_N(k)) over the sample items."""
    sizes = [u.n for u in sample.items]
    dim = sum(sizes)
    xi = np.asarray(xi, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    if xi.shape != (dim,) or eta.shape != (dim,):
        raise DimensionError(f"vectors must have length {dim}, got {xi.shape} and {eta.shape}")
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    out = np.zeros(len(points), dtype=complex)
    for idx, k in enumerate(points):
        if not 0 <= k < sample.m:
            raise DimensionError(f"point index {k} out of range for m={sample.m}")
        total = 0j
        for (u, lo, hi) in zip(sample.items, offsets[:-1], offsets[1:]):
            total += np.vdot(eta[lo:hi], u.blocks[k] @ xi[lo:hi])
        out[idx] = total
    return out


@dataclass(frozen=True)
class AbelianEmbedding:
    """Character values of a scalar measure and the observed supremum."""

    values: np.ndarray
    sup: float


def abelian_embed(mu: AtomicMeasure, characters) -> AbelianEmbedding:
    """Pair a scalar measure against phase characters.

    Returns the value sum_k atoms[k] gamma[k] for each supplied
    character, and the sup of the absolute values over the supplied
    characters together with the analytically optimal character
    (conjugate atom phases), which attains the total variation.
    """
    chars = np.asarray(characters, dtype=complex)
    if chars.ndim != 2 or chars.shape[0] < 1:
        raise DimensionError("characters must form a nonempty 2-D array")
    if chars.shape[1] != mu.m:
        raise DimensionError(f"characters have length {chars.shape[1]}, expected {mu.m}")
    values = chars @ mu.atoms
    mags = np.abs(mu.atoms)
    optimal = np.where(mags > 0.0, np.conj(mu.atoms) / np.where(mags > 0.0, mags, 1.0), 1.0)
    sup = max(float(np.max(np.abs(values))), abs(complex(optimal @ mu.atoms)))
    return AbelianEmbedding(values=values, sup=sup)
