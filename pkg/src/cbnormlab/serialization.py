"""JSON document helpers.

Complex numbers are serialized as [re, im] pairs and matrices as
row-major lists of pairs. Every persisted document carries a "version"
key; readers reject anything but version 1.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .measures import MatrixMeasure

FORMAT_VERSION = 1


def complex_pairs(matrix: np.ndarray) -> list:
    """Row-major [re, im] pairs of a 2-D complex array."""
    flat = np.asarray(matrix, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def matrix_from_pairs(pairs, rows: int, cols: int, name: str = "matrix") -> np.ndarray:
    data = np.asarray(pairs, dtype=float)
    if data.shape != (rows * cols, 2):
        raise FormatError(f"{name} expects {rows * cols} [re, im] pairs, got shape {data.shape}")
    return (data[:, 0] + 1j * data[:, 1]).reshape(rows, cols)


def _check_version(doc: dict, what: str) -> None:
    if not isinstance(doc, dict):
        raise FormatError(f"{what} document must be a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise FormatError(f"{what} document has unsupported version {doc.get('version')!r}")


def matrix_to_doc(matrix) -> dict:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2:
        raise FormatError(f"expected a 2-D matrix, got shape {arr.shape}")
    return {
        "version": FORMAT_VERSION,
        "rows": arr.shape[0],
        "cols": arr.shape[1],
        "entries": complex_pairs(arr),
    }


def matrix_from_doc(doc: dict) -> np.ndarray:
    _check_version(doc, "matrix")
    try:
        rows = int(doc["rows"])
        cols = int(doc["cols"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed matrix document: {exc}") from exc
    return matrix_from_pairs(entries, rows, cols, "matrix entries")


def measure_to_doc(mu: MatrixMeasure) -> dict:
    return {
        "version": FORMAT_VERSION,
        "p": mu.p,
        "m": mu.m,
        "coeffs": [complex_pairs(c) for c in mu.coeffs],
    }


def measure_from_doc(doc: dict) -> MatrixMeasure:
    _check_version(doc, "measure")
    try:
        p = int(doc["p"])
        m = int(doc["m"])
        raw = doc["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed measure document: {exc}") from exc
    if not isinstance(raw, list) or len(raw) != m:
        raise FormatError(f"measure document lists {len(raw) if isinstance(raw, list) else '?'} coefficients, expected {m}")
    coeffs = np.stack([matrix_from_pairs(c, p, p, f"coefficient {j}") for j, c in enumerate(raw)])
    return MatrixMeasure(coeffs)


def load_json(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def dump_json(doc, path=None) -> str:
    """Serialize deterministically; write to ``path`` when given."""
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
