"""Command-line front end.

Subcommands: ``norm`` (estimate the norms of a matrix measure read from
JSON), ``dilate`` (build the block unitary dilation of a matrix file),
``embed`` (build, extend, persist, and query embedding samples), and
``experiment`` (run the gap or convergence experiments and write a
report). Exit codes: 0 on success, 2 on input validation errors, 3 on
numerical failure (a witness that does not re-certify).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dilation import dilate
from .embedding import (
    DEFAULT_LEVELS,
    DEFAULT_TUPLES_PER_LEVEL,
    EmbeddingSample,
    TraceClassTuple,
    default_sample,
    embed,
    pairing,
    preadjoint,
    truncated_sd_norm,
)
from .errors import CertificationError, FormatError
from .experiments import cb_gap_experiment, embedding_convergence_experiment
from .linalg import operator_norm, seed_sequence
from .measures import AtomicMeasure, UnitaryTuple
from .norms import ball_level_norm, maxl1_level_norm, min_level_norm, sd_norm
from .optimize import OptimizerConfig
from .serialization import (
    dump_json,
    load_json,
    matrix_from_doc,
    matrix_to_doc,
    measure_from_doc,
)
from .experiments import estimate_doc  # serialized estimates share one schema


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="root seed (unsigned 64-bit)")
    parser.add_argument("--config", type=Path, help="JSON file with optimizer settings")
    parser.add_argument("--out", type=Path, help="write the result here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--restarts", type=int, help="override the restart count")
    parser.add_argument("--level", type=int, help="matrix level for the unitary supremum")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cbnormlab")
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="norm estimates for a matrix measure JSON file")
    _add_common(norm)
    norm.add_argument("--input", type=Path, required=True)
    norm.add_argument("--n-max", type=int, help="levels searched by the running supremum")

    dil = sub.add_parser("dilate", help="block unitary dilation of a matrix JSON file")
    _add_common(dil)
    dil.add_argument("--input", type=Path, required=True)

    emb = sub.add_parser("embed", help="build or query an embedding sample")
    _add_common(emb)
    emb.add_argument("--sample", type=Path, required=True, help="sample JSON file")
    emb.add_argument("--build", type=int, metavar="M", help="create a fresh sample on M points")
    emb.add_argument("--levels", default=",".join(str(n) for n in DEFAULT_LEVELS))
    emb.add_argument("--tuples-per-level", type=int, default=DEFAULT_TUPLES_PER_LEVEL)
    emb.add_argument("--extend", type=int, metavar="K", help="append K Haar tuples per level")
    emb.add_argument("--input", type=Path, help="matrix measure to embed")
    emb.add_argument("--check-duality", action="store_true", help="verify the trace pairing identity")
    emb.add_argument("--duality-trials", type=int, default=20)

    exp = sub.add_parser("experiment", help="run a seeded experiment")
    esub = exp.add_subparsers(dest="experiment", required=True)

    gap = esub.add_parser("cb-gap", help="max/min norm gap on Haar unitary coefficients")
    _add_common(gap)
    gap.add_argument("-n", dest="n", type=int, required=True, help="number of points")
    gap.add_argument("-p", dest="p", type=int, required=True, help="coefficient dimension")
    gap.add_argument("--trials", type=int, default=20)

    conv = esub.add_parser("embedding-convergence", help="truncated norm along a growing sample")
    _add_common(conv)
    conv.add_argument("--m", type=int, required=True, help="number of points")
    conv.add_argument("--p", type=int, default=1, help="coefficient dimension")
    conv.add_argument("--schedule", default="3,9,33,66,99", help="comma-separated sample sizes")

    return parser


def _load_config(args) -> OptimizerConfig:
    data = {}
    if args.config is not None:
        data = load_json(args.config)
        if not isinstance(data, dict):
            raise FormatError("config file must contain a JSON object")
    if args.restarts is not None:
        data = {**data, "restarts": args.restarts}
    return OptimizerConfig.from_dict(data)


def _emit(args, text: str) -> None:
    if args.out is not None:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_norm(args) -> int:
    cfg = _load_config(args)
    mu = measure_from_doc(load_json(args.input))
    level = args.level if args.level is not None else 2
    n_max = args.n_max if args.n_max is not None else level
    children = seed_sequence(args.seed).spawn(4)
    doc = {
        "level": level,
        "n_max": n_max,
        "m": mu.m,
        "p": mu.p,
        "max_norm": estimate_doc(maxl1_level_norm(mu, level, cfg, children[0])),
        "ball_norm": estimate_doc(ball_level_norm(mu, level, cfg, children[1])),
        "min_norm": estimate_doc(min_level_norm(mu, cfg, children[2])),
        "sd_norm": estimate_doc(sd_norm(mu, n_max, cfg, children[3])),
    }
    _emit(args, dump_json(doc))
    return 0


def _run_dilate(args) -> int:
    matrix = matrix_from_doc(load_json(args.input))
    result = dilate(matrix)
    n = result.source.shape[0]
    residual = operator_norm(result.result.conj().T @ result.result - np.eye(2 * n))
    doc = {
        "rows": n,
        "cols": n,
        "contraction_norm": operator_norm(result.source),
        "unitarity_residual": residual,
        "result": matrix_to_doc(result.result),
    }
    _emit(args, dump_json(doc))
    return 0


def _parse_levels(text: str) -> tuple:
    try:
        levels = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise FormatError(f"bad levels list {text!r}") from exc
    if not levels or any(n < 1 for n in levels):
        raise FormatError(f"bad levels list {text!r}")
    return levels


def _run_embed(args) -> int:
    levels = _parse_levels(args.levels)
    build_seed, extend_seed, duality_seed = seed_sequence(args.seed).spawn(3)
    if args.build is not None:
        sample = default_sample(args.build, build_seed, levels, args.tuples_per_level)
    elif args.sample.exists():
        sample = EmbeddingSample.from_doc(load_json(args.sample))
    else:
        raise FormatError(f"sample file {args.sample} does not exist (use --build M to create one)")
    if args.extend is not None:
        children = extend_seed.spawn(len(levels) * args.extend)
        extra = [
            UnitaryTuple.haar(n, sample.m, child)
            for n, child in zip(list(levels) * args.extend, children)
        ]
        sample = sample.extend(extra)
    if args.build is not None or args.extend is not None:
        dump_json(sample.to_doc(), args.sample)
    doc = {"sample": str(args.sample), "items": len(sample.items), "m": sample.m}
    if args.input is not None:
        mu = measure_from_doc(load_json(args.input))
        operator = embed(sample, mu)
        doc["block_norms"] = [operator_norm(b) for b in operator.blocks]
        doc["truncated_sd_norm"] = truncated_sd_norm(sample, mu)
        if args.check_duality:
            if mu.p != 1:
                raise FormatError("duality checks need a scalar measure (p = 1)")
            atoms = AtomicMeasure(mu.coeffs[:, 0, 0])
            rng = np.random.default_rng(duality_seed)
            worst = 0.0
            for _ in range(args.duality_trials):
                entries = tuple(
                    (rng.standard_normal((u.n, u.n)) + 1j * rng.standard_normal((u.n, u.n)))
                    / (2.0 * u.n)
                    for u in sample.items
                )
                s = TraceClassTuple(entries)
                lhs = pairing(operator, s)
                rhs = complex(np.sum(atoms.atoms * preadjoint(sample, s)))
                worst = max(worst, abs(lhs - rhs))
            doc["duality_trials"] = args.duality_trials
            doc["duality_max_residual"] = worst
    _emit(args, dump_json(doc))
    return 0


def _run_experiment(args) -> int:
    cfg = _load_config(args)
    if args.experiment == "cb-gap":
        level = args.level if args.level is not None else args.p
        report = cb_gap_experiment(args.n, args.p, args.trials, level, cfg, args.seed)
    else:
        schedule = [int(part) for part in args.schedule.split(",")]
        report = embedding_convergence_experiment(args.m, args.p, schedule, cfg, args.seed)
    if args.format == "csv":
        _emit(args, report.to_csv())
    else:
        _emit(args, dump_json(report.to_doc()))
    return 0


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        if args.command == "norm":
            return _run_norm(args)
        if args.command == "dilate":
            return _run_dilate(args)
        if args.command == "embed":
            return _run_embed(args)
        return _run_experiment(args)
    except CertificationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
