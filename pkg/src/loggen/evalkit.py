"""Corpus-level evaluation of the end-to-end pipeline.

Each sample runs with batch size 1 and per-stage wall-clock timing, mirroring
an interactive setting.  The report aggregates the three accuracy aspects,
BLEU/ROUGE over the message token sequences, level/position distance
histograms, and mean stage timings.  Failed samples are recorded and counted
but excluded from the quality aggregates.

The ablation runner re-scores the same dataset under several splitting
policies and buckets position accuracy by input length (at most L tokens vs
longer), which is where splitting actually matters.
"""

from __future__ import annotations

import csv
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from . import pipeline
from .backends import Backend
from .chunking import SplitConfig, parse_policy_name
from .corpus import Sample
from .errors import EmptyDataset, LoggenError
from .javalex import tokenize
from .metrics import (
    LEVEL_BUCKETS,
    POSITION_BUCKETS,
    bleu,
    level_bucket,
    level_distance,
    message_tokens,
    parse_level,
    position_bucket,
    position_distance,
    rouge,
)

REPORT_SCHEMA_VERSION = 1


@dataclass
class SampleRecord:
    sample_id: str
    position_ok: bool = False
    level_ok: bool = False
    message_ok: bool = False
    all3_ok: bool = False
    level_distance: int | None = None
    position_distance: int | None = None
    bleu: float = 0.0
    bleu_1: float = 0.0
    bleu_2: float = 0.0
    bleu_3: float = 0.0
    bleu_4: float = 0.0
    rouge_1: float = 0.0
    rouge_2: float = 0.0
    rouge_l: float = 0.0
    predicted_index: int | None = None
    predicted_statement: str | None = None
    stage1_seconds: float = 0.0
    stage2_seconds: float = 0.0
    total_seconds: float = 0.0
    error: str | None = None


@dataclass
class EvalReport:
    records: list[SampleRecord]
    config: dict = field(default_factory=dict)

    @property
    def evaluated(self) -> list[SampleRecord]:
        return [r for r in self.records if r.error is None]

    def to_json(self) -> dict:
        done = self.evaluated
        n = len(done)

        def pct(flag: str) -> float:
            return 100.0 * sum(getattr(r, flag) for r in done) / n if n else 0.0

        def mean(attr: str) -> float:
            return sum(getattr(r, attr) for r in done) / n if n else 0.0

        level_hist = {bucket: 0 for bucket in LEVEL_BUCKETS}
        position_hist = {bucket: 0 for bucket in POSITION_BUCKETS}
        for record in done:
            level_hist[level_bucket(record.level_distance)] += 1
            position_hist[position_bucket(record.position_distance)] += 1
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "config": self.config,
            "counts": {
                "total": len(self.records),
                "evaluated": n,
                "failed": len(self.records) - n,
            },
            "accuracy": {
                "position": pct("position_ok"),
                "level": pct("level_ok"),
                "message": pct("message_ok"),
                "all3": pct("all3_ok"),
            },
            "bleu": {
                "bleu": mean("bleu"),
                "bleu_1": mean("bleu_1"),
                "bleu_2": mean("bleu_2"),
                "bleu_3": mean("bleu_3"),
                "bleu_4": mean("bleu_4"),
            },
            "rouge": {
                "rouge_1": mean("rouge_1"),
                "rouge_2": mean("rouge_2"),
                "rouge_l": mean("rouge_l"),
            },
            "distance": {
                "level_histogram": level_hist,
                "position_histogram": position_hist,
            },
            "timing": {
                "stage1_seconds": mean("stage1_seconds"),
                "stage2_seconds": mean("stage2_seconds"),
                "total_seconds": mean("total_seconds"),
            },
            "samples": [asdict(r) for r in self.records],
        }

    def write_csv(self, path: Path) -> None:
        fields = list(asdict(self.records[0])) if self.records else []
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=fields)
            writer.writeheader()
            for record in self.records:
                writer.writerow(asdict(record))


def evaluate_sample(sample: Sample, backend: Backend, cfg: SplitConfig,
                    beam_size: int = pipeline.DEFAULT_BEAM_SIZE) -> SampleRecord:
    record = SampleRecord(sample_id=sample.id)
    try:
        stream = tokenize(sample.method_source)
        result = pipeline.run(stream, backend, backend, cfg, beam_size=beam_size)
    except LoggenError as exc:
        record.error = f"{exc.code}: {exc}"
        return record
    predicted = result.inserted_statement
    record.predicted_index = result.insertion_token_index
    record.predicted_statement = predicted.raw_text
    record.stage1_seconds = result.stage1_seconds
    record.stage2_seconds = result.stage2_seconds
    record.total_seconds = result.total_seconds

    record.position_ok = result.insertion_token_index == sample.target_index
    record.position_distance = position_distance(
        result.insertion_token_index, sample.target_index
    )
    target_level = sample.target_level
    record.level_ok = predicted.level == target_level
    if predicted.level is not None and target_level is not None:
        record.level_distance = level_distance(predicted.level, target_level)

    reference = message_tokens(sample.target_statement)
    hypothesis = list(predicted.message_tokens)
    record.message_ok = hypothesis == reference
    record.all3_ok = record.position_ok and record.level_ok and record.message_ok
    if reference:
        record.bleu, (record.bleu_1, record.bleu_2, record.bleu_3, record.bleu_4) = bleu(
            hypothesis, reference
        )
        record.rouge_1, record.rouge_2, record.rouge_l = rouge(hypothesis, reference)
    return record


def evaluate(
    samples: Sequence[Sample], backend: Backend, cfg: SplitConfig,
    beam_size: int = pipeline.DEFAULT_BEAM_SIZE,
    jobs: int = 1,
    config_note: dict | None = None,
) -> EvalReport:
    """Run every sample through the pipeline and aggregate the metrics.

    Samples may be processed by several workers, but backend access is
    serialized so per-sample timings keep batch-size-1 semantics.
    """
    if not samples:
        raise EmptyDataset("no samples to evaluate")
    records: list[SampleRecord]
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        gate = threading.Lock()

        def worker(sample: Sample) -> SampleRecord:
            with gate:
                return evaluate_sample(sample, backend, cfg, beam_size)

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(worker, samples))
    else:
        records = [evaluate_sample(sample, backend, cfg, beam_size) for sample in samples]
    note = dict(config_note or {})
    note.setdefault("policy", cfg.policy)
    note.setdefault("max_model_input_length", cfg.max_model_input_length)
    note.setdefault("max_chunk_length", cfg.max_chunk_length)
    note.setdefault("context_statements", cfg.context_statements)
    note.setdefault("beam_size", beam_size)
    return EvalReport(records=records, config=note)


def ablate(
    samples: Sequence[Sample], scorer: Backend, base_cfg: SplitConfig,
    policy_names: Sequence[str],
) -> dict:
    """Position accuracy per splitting policy, bucketed by input length.

    The output mirrors a three-column-group table: inputs of at most L
    tokens, longer inputs, and the total.
    """
    if not samples:
        raise EmptyDataset("no samples to evaluate")
    L = base_cfg.max_model_input_length
    short_label, long_label = f"<={L}", f">{L}"
    prepared = []
    for sample in samples:
        stream = tokenize(sample.method_source)
        prepared.append((sample, stream, len(stream) <= L))
    rows = []
    for name in policy_names:
        cfg = parse_policy_name(name, base_cfg)
        buckets = {
            short_label: {"samples": 0, "correct": 0},
            long_label: {"samples": 0, "correct": 0},
        }
        for sample, stream, is_short in prepared:
            label = short_label if is_short else long_label
            buckets[label]["samples"] += 1
            try:
                prediction = pipeline.predict_position(stream, scorer, cfg)
            except LoggenError:
                continue
            if prediction.token_index == sample.target_index:
                buckets[label]["correct"] += 1
        total = {
            "samples": sum(b["samples"] for b in buckets.values()),
            "correct": sum(b["correct"] for b in buckets.values()),
        }
        buckets["total"] = total
        for bucket in buckets.values():
            bucket["accuracy"] = (
                100.0 * bucket["correct"] / bucket["samples"] if bucket["samples"] else 0.0
            )
        rows.append({"policy": name, "buckets": buckets})
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "bucket_labels": [short_label, long_label, "total"],
        "policies": rows,
    }
