"""Command line interface.

Subcommands: tokenize, split, run, suggest, train-baseline, extract-samples,
stats, eval, ablate.  Every command supports --json; outputs are
schema-stable.  Exit codes: 0 success, 1 domain error (one-line JSON on
stderr), 2 usage error.

Configuration precedence is flags > config file (--config, JSON) > defaults,
and the effective values are echoed into every report for reproducibility.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import baseline, chunking, corpus, evalkit, pipeline
from .backends import Backend, HttpBackend
from .chunking import SplitConfig
from .errors import InvalidConfig, LoggenError
from .javalex import tokenize


@dataclass
class ToolConfig:
    max_model_input_length: int = 512
    max_chunk_length: int = 300
    context_statements: int = 5
    policy: str = chunking.AVERAGE_SPLIT_STATEMENT
    beam_size: int = pipeline.DEFAULT_BEAM_SIZE
    suggest_budget: int = pipeline.DEFAULT_SUGGESTION_BUDGET
    suggest_threshold: float = pipeline.DEFAULT_SUGGESTION_THRESHOLD
    backend: str | None = None
    logger_pattern: str = corpus.DEFAULT_LOGGER_PATTERN

    def validate(self) -> None:
        self.split_config().validate()
        if self.beam_size < 1:
            raise InvalidConfig("beam size must be at least 1")
        if self.suggest_budget < 1:
            raise InvalidConfig("suggestion budget must be at least 1")
        if not 0.0 <= self.suggest_threshold <= 1.0:
            raise InvalidConfig("suggestion threshold must be in [0, 1]")

    def split_config(self) -> SplitConfig:
        return SplitConfig(
            max_model_input_length=self.max_model_input_length,
            max_chunk_length=self.max_chunk_length,
            context_statements=self.context_statements,
            policy=self.policy,
        )

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_FLAG_DEST = {
    "L": "max_model_input_length",
    "m": "max_chunk_length",
    "k": "context_statements",
    "policy": "policy",
    "beam": "beam_size",
    "budget": "suggest_budget",
    "threshold": "suggest_threshold",
    "backend": "backend",
    "logger_pattern": "logger_pattern",
}


def resolve_config(args: argparse.Namespace) -> ToolConfig:
    cfg = ToolConfig()
    file_values: dict = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            file_values = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfig(f"cannot read config file {config_path}: {exc}")
        if not isinstance(file_values, dict):
            raise InvalidConfig("config file must hold a JSON object")
    for flag, dest in _FLAG_DEST.items():
        flag_value = getattr(args, flag, None)
        if flag_value is not None:
            setattr(cfg, dest, flag_value)
        elif dest in file_values:
            setattr(cfg, dest, file_values[dest])
    if "policy" in file_values or getattr(args, "policy", None) is not None:
        # names like average-split-300-statement-5 embed m and k
        resolved = chunking.parse_policy_name(cfg.policy, cfg.split_config())
        cfg.policy = resolved.policy
        if getattr(args, "m", None) is None and "max_chunk_length" not in file_values:
            cfg.max_chunk_length = resolved.max_chunk_length
        if getattr(args, "k", None) is None and "context_statements" not in file_values:
            cfg.context_statements = resolved.context_statements
    cfg.validate()
    return cfg


def make_backend(cfg: ToolConfig) -> Backend:
    locator = cfg.backend
    if not locator:
        raise InvalidConfig("no backend configured; pass --backend")
    if locator.startswith("baseline:"):
        return baseline.BaselineBackend(baseline.load_model(Path(locator[len("baseline:"):])))
    if locator.startswith(("http://", "https://")):
        return HttpBackend(locator)
    raise InvalidConfig(f"unknown backend locator {locator!r}")


def _emit(payload: dict, args: argparse.Namespace) -> None:
    indent = None if getattr(args, "compact", False) else 2
    print(json.dumps(payload, indent=indent, ensure_ascii=False))


def _read_method(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_tokenize(args: argparse.Namespace) -> int:
    stream = tokenize(_read_method(args.method))
    payload = {
        "token_count": len(stream),
        "tokens": [
            {"index": t.index, "text": t.text, "kind": t.kind, "start": t.start, "end": t.end}
            for t in stream.tokens
        ],
        "gaps": list(stream.gaps),
    }
    _emit(payload, args)
    return 0


def cmd_split(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    stream = tokenize(_read_method(args.method))
    plan = chunking.plan_for_policy(stream, cfg.split_config())
    payload = {
        "policy": plan.policy,
        "total_tokens": plan.total_tokens,
        "model_input_length": plan.model_input_length,
        "context_budget": cfg.split_config().context_budget,
        "chunks": [
            {
                "ordinal": c.ordinal,
                "core": list(c.core),
                "left_context": list(c.left_context),
                "right_context": list(c.right_context),
                "content_length": c.content_length,
                # rendered positions whose scores survive the merge
                "core_flags": [c.core[0] - c.left_context[0], c.core[1] - c.left_context[0]],
            }
            for c in plan.chunks
        ],
    }
    _emit(payload, args)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    backend = make_backend(cfg)
    stream = tokenize(_read_method(args.method))
    result = pipeline.run(stream, backend, backend, cfg.split_config(), beam_size=cfg.beam_size)
    payload = {
        "position": result.insertion_token_index,
        "statement": result.inserted_statement.raw_text,
        "level": result.inserted_statement.level.name.lower()
        if result.inserted_statement.level
        else "unknown",
        "candidates": [{"text": c.text, "score": c.score} for c in result.candidates],
        "timings": {
            "stage1_ms": result.stage1_seconds * 1000.0,
            "stage2_ms": result.stage2_seconds * 1000.0,
            "total_ms": result.total_seconds * 1000.0,
        },
        "output": result.output_source,
        "config": cfg.to_json(),
    }
    _emit(payload, args)
    return 0


def cmd_suggest(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    backend = make_backend(cfg)
    stream = tokenize(_read_method(args.method))
    result = pipeline.suggest(
        stream,
        backend,
        backend,
        cfg.split_config(),
        budget=cfg.suggest_budget,
        threshold=cfg.suggest_threshold,
        beam_size=cfg.beam_size,
    )
    payload = {
        "budget": result.budget,
        "threshold": result.threshold,
        "suggestions": [
            {
                "rank": s.rank,
                "position": s.token_index,
                "statement": s.statement,
                "position_rank": s.position_rank,
                "beam_rank": s.beam_rank,
            }
            for s in result.suggestions
        ],
        "config": cfg.to_json(),
    }
    _emit(payload, args)
    return 0


def cmd_train_baseline(args: argparse.Namespace) -> int:
    samples = corpus.read_dataset(Path(args.corpus))
    model = baseline.train(samples, window=args.window, alpha=args.alpha)
    baseline.save_model(model, Path(args.out))
    _emit(
        {
            "out": args.out,
            "samples": len(samples),
            "contexts": len(model.ngram_counts),
            "index_entries": len(model.retrieval_index),
        },
        args,
    )
    return 0


def cmd_extract_samples(args: argparse.Namespace) -> int:
    pattern = args.logger_pattern or corpus.DEFAULT_LOGGER_PATTERN
    samples, skipped = corpus.extract_from_directory(
        Path(args.src), logger_pattern=pattern, jobs=args.jobs
    )
    corpus.write_dataset(samples, Path(args.out))
    if args.manifest:
        manifest = corpus.build_manifest(samples) if samples else {"count": 0}
        Path(args.manifest).write_text(
            json.dumps(manifest, indent=2, ensure_ascii=False), encoding="utf-8"
        )
    _emit({"out": args.out, "samples": len(samples), "skipped": skipped}, args)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    samples = corpus.read_dataset(Path(args.dataset))
    stats = corpus.corpus_stats(samples)
    payload = {
        "count": stats.count,
        "mean_input_token_length": stats.mean_input_tokens,
        "mean_target_statement_token_length": stats.mean_statement_tokens,
    }
    if args.json:
        _emit(payload, args)
    else:
        for key, value in payload.items():
            print(f"{key}: {value:.2f}" if isinstance(value, float) else f"{key}: {value}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    backend = make_backend(cfg)
    samples = corpus.read_dataset(Path(args.dataset))
    report = evalkit.evaluate(
        samples,
        backend,
        cfg.split_config(),
        beam_size=cfg.beam_size,
        jobs=args.jobs,
        config_note=cfg.to_json(),
    )
    payload = report.to_json()
    if args.report:
        Path(args.report).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False), encoding="utf-8"
        )
    if args.csv:
        report.write_csv(Path(args.csv))
    if args.json:
        _emit(payload, args)
    else:
        acc = payload["accuracy"]
        timing = payload["timing"]
        print(
            f"evaluated {payload['counts']['evaluated']}/{payload['counts']['total']} samples"
        )
        print(
            "accuracy: position {position:.2f}% level {level:.2f}% "
            "message {message:.2f}% all3 {all3:.2f}%".format(**acc)
        )
        print(
            "mean seconds/sample: total {total_seconds:.4f} "
            "(stage1 {stage1_seconds:.4f}, stage2 {stage2_seconds:.4f})".format(**timing)
        )
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    backend = make_backend(cfg)
    samples = corpus.read_dataset(Path(args.dataset))
    policies = [name.strip() for name in args.policies.split(",") if name.strip()]
    table = evalkit.ablate(samples, backend, cfg.split_config(), policies)
    if args.json:
        _emit(table, args)
        return 0
    labels = table["bucket_labels"]
    header = ["policy"]
    for label in labels:
        header += [f"{label} correct", f"{label} accuracy"]
    print("\t".join(header))
    for row in table["policies"]:
        cells = [row["policy"]]
        for label in labels:
            bucket = row["buckets"][label]
            cells += [str(bucket["correct"]), f"{bucket['accuracy']:.2f}%"]
        print("\t".join(cells))
    return 0


def _add_config_flags(parser: argparse.ArgumentParser, *, backend: bool = False) -> None:
    parser.add_argument("--config", help="JSON config file (flags take precedence)")
    parser.add_argument("--policy", help="splitting policy, e.g. average-split-300-statement-5")
    parser.add_argument("--L", type=int, dest="L", help="max model input length")
    parser.add_argument("--m", type=int, dest="m", help="max chunk length")
    parser.add_argument("--k", type=int, dest="k", help="context statements per side")
    parser.add_argument("--beam", type=int, help="beam size for generation")
    parser.add_argument("--budget", type=int, help="suggestion budget")
    parser.add_argument("--threshold", type=float, help="suggestion probability threshold")
    parser.add_argument("--logger-pattern", dest="logger_pattern", help="logger receiver pattern")
    if backend:
        parser.add_argument("--backend", help="baseline:<model.json> or http://host:port")


def _add_json_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--compact", action="store_true", help="single-line JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loggen",
        description="Generate and insert logging statements into Java methods",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="lex a method into an indexed token stream")
    p.add_argument("--method", required=True, help="file with the method source")
    _add_json_flag(p)
    p.set_defaults(handler=cmd_tokenize)

    p = sub.add_parser("split", help="show the chunk plan for a method")
    p.add_argument("--method", required=True)
    _add_config_flags(p)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("run", help="predict a position and insert a generated statement")
    p.add_argument("--method", required=True)
    _add_config_flags(p, backend=True)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("suggest", help="emit a budgeted set of position/statement suggestions")
    p.add_argument("--method", required=True)
    _add_config_flags(p, backend=True)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_suggest)

    p = sub.add_parser("train-baseline", help="train the statistical baseline backend")
    p.add_argument("--corpus", required=True, help="training dataset (JSONL)")
    p.add_argument("--out", required=True, help="output model file (JSON)")
    p.add_argument("--window", type=int, default=baseline.DEFAULT_WINDOW)
    p.add_argument("--alpha", type=float, default=baseline.DEFAULT_ALPHA)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_train_baseline)

    p = sub.add_parser("extract-samples", help="mine samples from a directory of .java methods")
    p.add_argument("--src", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", help="also write a dataset manifest JSON")
    p.add_argument("--logger-pattern", dest="logger_pattern")
    p.add_argument("--jobs", type=int, default=1)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_extract_samples)

    p = sub.add_parser("stats", help="corpus statistics for a dataset")
    p.add_argument("dataset")
    _add_json_flag(p)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("eval", help="run the full evaluation harness over a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--report", help="write the full JSON report here")
    p.add_argument("--csv", help="write per-sample rows as CSV")
    p.add_argument("--jobs", type=int, default=1)
    _add_config_flags(p, backend=True)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("ablate", help="compare splitting policies on position accuracy")
    p.add_argument("--dataset", required=True)
    p.add_argument("--policies", required=True, help="comma-separated policy names")
    _add_config_flags(p, backend=True)
    _add_json_flag(p)
    p.set_defaults(handler=cmd_ablate)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except LoggenError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
