"""Command-line front end: normalize, build, train, correct, eval.

All text I/O is UTF-8 with ZWNJ as a literal U+200C; ``-`` means stdin or
stdout. Commands that write a named artifact also write a
``<artifact>.manifest.json`` (or ``manifest.json`` in the output directory)
recording flags, input digests, seed, tool version, and timestamp
(``SOURCE_DATE_EPOCH`` overrides the clock for reproducible runs).
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .charset import CharClassTable, load_table, normalize_text
from .corpus import SplitSpec, load_parallel, load_tokenized_corpus, split_corpus
from .crf import TrainConfig, correct, load_model, save_model, train
from .errors import CorpusFormatError, FasegError
from .evaluation import (
    evaluate_external,
    format_report,
    merge_reports,
    report_to_kv,
    score_baseline,
)
from .labeling import encode_stripped, read_dataset, write_dataset
from .noise import NoiseConfig, build_noisy_dataset, dataset_metadata


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _out_stream(path: str):
    if path == "-":
        return io.TextIOWrapper(sys.stdout.buffer, encoding="utf-8", newline="")
    return open(path, "w", encoding="utf-8", newline="")


def _close(stream, path: str) -> None:
    if path == "-":
        stream.flush()
        stream.detach()  # leave sys.stdout.buffer usable
    else:
        stream.close()


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _load_table_arg(args) -> CharClassTable | None:
    if getattr(args, "table", None):
        return load_table(args.table)
    return None


def _manifest(command: str, args, inputs: dict[str, str]) -> dict:
    config = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "command") and not k.startswith("_")
    }
    timestamp = int(os.environ.get("SOURCE_DATE_EPOCH", time.time()))
    return {
        "command": command,
        "config": config,
        "inputs": inputs,
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "timestamp": timestamp,
    }


def _write_manifest(path: Path, manifest: dict) -> None:
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")


def cmd_normalize(args) -> int:
    table = _load_table_arg(args)
    data = _read_bytes(args.input)
    out = _out_stream(args.output)
    try:
        for lineno, raw in enumerate(data.splitlines(), start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusFormatError(f"invalid UTF-8 ({exc.reason})", lineno) from exc
            out.write(normalize_text(line, table) + "\n")
    finally:
        _close(out, args.output)
    if args.output != "-":
        manifest = _manifest("normalize", args, {args.input: _digest(data)})
        _write_manifest(Path(args.output + ".manifest.json"), manifest)
    return 0


def cmd_build(args) -> int:
    table = _load_table_arg(args)
    data = _read_bytes(args.input)
    corpus = load_tokenized_corpus(
        data.splitlines(), fmt=args.format, table=table, provenance=args.input
    )
    spec = SplitSpec(test_fraction=args.test_frac, valid_fraction=args.valid_frac)
    test_part, valid_part, train_part = split_corpus(corpus, spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, part in (("test", test_part), ("valid", valid_part), ("train", train_part)):
        if args.mode == "A":
            samples = [encode_stripped(s) for s in part.sentences]
            meta = {"mode": "A", "split": name, "tool_version": __version__}
        else:
            cfg = NoiseConfig(
                r1_max=args.r1_max,
                r2_max=args.r2_max,
                r3_max=args.r3_max,
                seed=args.seed,
            )
            samples = build_noisy_dataset(part, cfg, table)
            meta = dataset_metadata(cfg, __version__) | {"mode": "B", "split": name}
        with open(out_dir / f"{name}.tsv", "w", encoding="utf-8", newline="") as fh:
            write_dataset(fh, samples, meta)
    manifest = _manifest("build", args, {args.input: _digest(data)})
    _write_manifest(out_dir / "manifest.json", manifest)
    return 0


def cmd_train(args) -> int:
    data_bytes = _read_bytes(args.data)
    samples, _ = read_dataset(io.StringIO(data_bytes.decode("utf-8")))
    valid = None
    valid_bytes = b""
    if args.valid:
        valid_bytes = _read_bytes(args.valid)
        valid, _ = read_dataset(io.StringIO(valid_bytes.decode("utf-8")))
    cfg = TrainConfig(
        c1=args.c1,
        c2=args.c2,
        max_iterations=args.max_iter,
        convergence_tol=args.tol,
    )

    def progress(info) -> None:
        line = f"iter={info.iteration} objective={info.objective:.6f}"
        if info.valid_macro_f1 is not None:
            line += f" valid_macro_f1={info.valid_macro_f1:.4f}"
        print(line)

    table = _load_table_arg(args)
    model = train(samples, cfg, table=table, valid=valid, progress=progress)
    save_model(model, args.model_out)
    inputs = {args.data: _digest(data_bytes)}
    if args.valid:
        inputs[args.valid] = _digest(valid_bytes)
    _write_manifest(
        Path(args.model_out + ".manifest.json"), _manifest("train", args, inputs)
    )
    return 0


def cmd_correct(args) -> int:
    model = load_model(args.model)
    table = _load_table_arg(args)
    data = _read_bytes(args.input)
    out = _out_stream(args.output)
    try:
        for lineno, raw in enumerate(data.splitlines(), start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusFormatError(f"invalid UTF-8 ({exc.reason})", lineno) from exc
            out.write(correct(model, line, table) + "\n")
    finally:
        _close(out, args.output)
    if args.output != "-":
        inputs = {
            args.input: _digest(data),
            args.model: _digest(Path(args.model).read_bytes()),
        }
        _write_manifest(
            Path(args.output + ".manifest.json"), _manifest("correct", args, inputs)
        )
    return 0


def cmd_eval(args) -> int:
    table = _load_table_arg(args)
    pairs_data = _read_bytes(args.pairs)
    pairs = load_parallel(pairs_data.splitlines(), table=table)
    if args.baseline:
        reports = [score_baseline(p) for p in pairs]
    elif args.external:
        corrected_data = _read_bytes(args.external)
        corrected = corrected_data.decode("utf-8").splitlines()
        if len(corrected) != len(pairs):
            raise FasegError(
                f"line count mismatch: {len(pairs)} pairs vs "
                f"{len(corrected)} corrected lines"
            )
        reports = [
            evaluate_external(p.raw, normalize_text(c, table), p.gold)
            for p, c in zip(pairs, corrected)
        ]
    else:
        model = load_model(args.model)
        reports = [
            evaluate_external(p.raw, correct(model, p.raw, table), p.gold)
            for p in pairs
        ]
    merged = merge_reports(reports)
    print(format_report(merged))
    if args.kv:
        kv_text = report_to_kv(merged) + "\n"
        if args.kv == "-":
            sys.stdout.write(kv_text)
        else:
            Path(args.kv).write_text(kv_text, "utf-8")
            _write_manifest(
                Path(args.kv + ".manifest.json"),
                _manifest("eval", args, {args.pairs: _digest(pairs_data)}),
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faseg",
        description="Persian word-segmentation and ZWNJ correction toolkit",
    )
    parser.add_argument("--version", action="version", version=f"faseg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize text line by line")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--table", help="normalization table override file")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("build", help="build tagged datasets from a corpus")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("--format", choices=("plain", "columns"), default="plain")
    p.add_argument("--mode", choices=("A", "B"), default="A",
                   help="A: stripped encoding; B: noisy retained encoding")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--test-frac", type=float, default=0.10)
    p.add_argument("--valid-frac", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r1-max", type=float, default=0.15)
    p.add_argument("--r2-max", type=float, default=0.20)
    p.add_argument("--r3-max", type=float, default=0.05)
    p.add_argument("--table")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("train", help="train a CRF model on a dataset file")
    p.add_argument("--data", required=True)
    p.add_argument("--valid", help="dataset for per-iteration validation F1")
    p.add_argument("--model-out", required=True)
    p.add_argument("--c1", type=float, default=0.1)
    p.add_argument("--c2", type=float, default=0.1)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--table")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("correct", help="correct text line by line with a model")
    p.add_argument("--model", required=True)
    p.add_argument("-i", "--input", default="-")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--table")
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("eval", help="evaluate on a raw<TAB>gold parallel corpus")
    p.add_argument("--pairs", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--baseline", action="store_true",
                       help="score the raw text's own separator decisions")
    group.add_argument("--external", metavar="CORRECTED",
                       help="file of externally corrected lines to score")
    group.add_argument("--model", help="model file; corrects raw, then scores")
    p.add_argument("--kv", help="write machine-readable report here ('-' = stdout)")
    p.add_argument("--table")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FasegError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
