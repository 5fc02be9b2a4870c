"""Command line front end.

Subcommands wrap the library: ``sample`` / ``enumerate`` emit the blank-line
separated matrix text format, ``svd`` scores matrices from such a stream,
``clcd`` / ``qclcd`` evaluate denominators for explicit vectors, and
``quasirand`` / ``rerandom`` / ``experiment`` run the config-driven Monte
Carlo drivers.  Exit codes: 0 success, 1 validation error (bad usage, bad
config, bad input), 2 runtime failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from .arithmetic import ClcdParams, clcd, qclcd
from .core import ValidationError, read_matrix_stream, write_matrix_stream
from .harness import (
    ConfigError,
    ExperimentConfig,
    read_config,
    run_experiment,
    exact_singular,
    write_csv,
)
from .sampler import derive_rng, enumerate_regular, sample_uniform
from .spectral import restricted_smallest, smallest_singular


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regdigraph",
        description="Regular digraph matrices: sampling, spectra, denominators, experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
        p.add_argument("--config", required=config_required, help="experiment config file")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", default=None, help="output path (default: config out or stdout)")
        p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")

    p = sub.add_parser("sample", help="draw matrices and print the text stream")
    add_common(p)

    p = sub.add_parser("enumerate", help="enumerate the whole family as a text stream")
    add_common(p)

    p = sub.add_parser("svd", help="score matrices from a text stream")
    p.add_argument("--input", required=True, help="matrix stream file")
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")

    p = sub.add_parser("clcd", help="denominator of one vector")
    p.add_argument("--vector", required=True, help="comma-separated coordinates")
    p.add_argument("--rel-coeff", type=float, default=0.1)
    p.add_argument("--abs-cap", type=float, default=10.0)
    p.add_argument("--max-scale", type=float, default=100.0)

    p = sub.add_parser("qclcd", help="rank-th smallest denominator over restrictions")
    p.add_argument("--vector", required=True, help="comma-separated coordinates")
    p.add_argument("--sets", required=True, help="semicolon-separated comma lists of indices")
    p.add_argument("--rank", type=int, default=1, help="1-based rank among the restrictions")
    p.add_argument("--rel-coeff", type=float, default=0.1)
    p.add_argument("--abs-cap", type=float, default=10.0)
    p.add_argument("--max-scale", type=float, default=100.0)

    p = sub.add_parser("quasirand", help="run the quasirandomness experiment")
    add_common(p)

    p = sub.add_parser("rerandom", help="run the rerandomization uniformity experiment")
    add_common(p)

    p = sub.add_parser("experiment", help="run the experiment named in the config")
    add_common(p)

    return parser


def _load_config(args: argparse.Namespace, force_experiment: str | None = None) -> ExperimentConfig:
    cfg = read_config(args.config)
    updates: dict = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.out is not None:
        updates["out"] = args.out
    if force_experiment is not None and cfg.experiment != force_experiment:
        updates["experiment"] = force_experiment
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _print_summary(result) -> None:
    for key in sorted(result.summary):
        val = result.summary[key]
        print(f"{key} = {val!r}" if isinstance(val, float) else f"{key} = {val}")


def _parse_vector(text: str) -> np.ndarray:
    try:
        vec = np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError as exc:
        raise ValidationError(f"bad vector {text!r}: {exc}") from None
    if vec.size < 2:
        raise ValidationError("vector needs at least 2 coordinates")
    return vec


def _parse_sets(text: str) -> tuple[tuple[int, ...], ...]:
    try:
        sets = tuple(
            tuple(int(t) for t in chunk.split(",") if t.strip())
            for chunk in text.split(";")
            if chunk.strip()
        )
    except ValueError as exc:
        raise ValidationError(f"bad set list {text!r}: {exc}") from None
    if not sets:
        raise ValidationError("need at least one index set")
    return sets


def _cmd_sample(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    matrices = [
        sample_uniform(cfg.sampler_config(), derive_rng(cfg.seed, t)) for t in range(cfg.trials)
    ]
    _emit(write_matrix_stream(matrices), args.out if args.out is not None else cfg.out)
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    family = enumerate_regular(cfg.n, cfg.degree)
    _emit(write_matrix_stream(family), args.out if args.out is not None else cfg.out)
    print(f"{len(family)} matrices at n={cfg.n}, d={cfg.degree}", file=sys.stderr)
    return 0


def _cmd_svd(args: argparse.Namespace) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            matrices = read_matrix_stream(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {args.input}: {exc}") from None
    if not matrices:
        raise ValidationError(f"no matrices in {args.input}")
    rows = []
    for idx, m in enumerate(matrices):
        dense = m.dense()
        rows.append({
            "index": idx,
            "n": m.n,
            "d": m.d,
            "s_min": smallest_singular(dense).value,
            "restricted_s_min": restricted_smallest(dense),
            "exact_singular": exact_singular(m),
        })
    columns = ("index", "n", "d", "s_min", "restricted_s_min", "exact_singular")
    if args.out is None:
        from .harness import format_csv

        sys.stdout.write(format_csv(columns, rows))
    else:
        write_csv(rows, args.out, columns)
    return 0


def _cmd_clcd(args: argparse.Namespace) -> int:
    vec = _parse_vector(args.vector)
    params = ClcdParams(abs_cap=args.abs_cap, rel_coeff=args.rel_coeff, max_scale=args.max_scale)
    value = clcd(vec, params)
    print("inf" if math.isinf(value) else repr(value))
    return 0


def _cmd_qclcd(args: argparse.Namespace) -> int:
    vec = _parse_vector(args.vector)
    sets = _parse_sets(args.sets)
    for s in sets:
        if any(not 0 <= i < vec.size for i in s):
            raise ValidationError(f"set {s} has indices outside [0, {vec.size})")
    params = ClcdParams(abs_cap=args.abs_cap, rel_coeff=args.rel_coeff, max_scale=args.max_scale)
    value = qclcd(vec, sets, args.rank, params)
    print("inf" if math.isinf(value) else repr(value))
    return 0


def _cmd_experiment(args: argparse.Namespace, force: str | None = None) -> int:
    cfg = _load_config(args, force_experiment=force)
    result = run_experiment(cfg, threads=args.threads)
    if cfg.out is not None:
        print(f"wrote {cfg.out}", file=sys.stderr)
    else:
        sys.stdout.write(result.csv_text())
    _print_summary(result)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; usage errors are validation errors
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "enumerate":
            return _cmd_enumerate(args)
        if args.command == "svd":
            return _cmd_svd(args)
        if args.command == "clcd":
            return _cmd_clcd(args)
        if args.command == "qclcd":
            return _cmd_qclcd(args)
        if args.command == "quasirand":
            return _cmd_experiment(args, force="quasirandom")
        if args.command == "rerandom":
            return _cmd_experiment(args, force="rerandom-uniformity")
        return _cmd_experiment(args)
    except (ConfigError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        raise
    except Exception as exc:  # runtime failures map to exit code 2
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
