"""Dataset construction: mine logging statements out of Java methods.

A Sample is a method with one logging statement removed, plus everything
needed to restore it: the anchor token index the statement followed, the
statement's verbatim text and its severity level.  Extraction and insertion
are exact inverses, which the test suite exercises as a round-trip property.

The dataset format is JSONL, one sample per line, with unknown fields
preserved.  A manifest can record the provenance filters of the mined
repositories alongside corpus statistics.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    EmptyDataset,
    ParseError,
    PrecedingTokenNotAnchor,
    SpanNotDetected,
    UnterminatedLiteral,
)
from .javalex import ANCHOR_TEXTS, StatementSpan, TokenStream, tokenize
from .metrics import Level, parse_level

#: Receivers whose name matches this pattern (case-insensitive search) count
#: as loggers; precision over recall keeps mined datasets clean.
DEFAULT_LOGGER_PATTERN = "log"

_LEVEL_NAMES = frozenset(level.name.lower() for level in Level)

_SAMPLE_FIELDS = ("id", "method", "target_index", "target_statement", "target_level", "meta")


@dataclass
class Sample:
    id: str
    method_source: str
    target_index: int
    target_statement: str
    target_level: Level | None
    meta: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "method": self.method_source,
            "target_index": self.target_index,
            "target_statement": self.target_statement,
            "target_level": self.target_level.name.lower() if self.target_level else "unknown",
            "meta": self.meta,
        }
        for key in sorted(self.extras):
            record[key] = self.extras[key]
        return record

    @classmethod
    def from_record(cls, record: dict) -> "Sample":
        level_name = record["target_level"]
        level = None if level_name == "unknown" else Level[level_name.upper()]
        extras = {k: v for k, v in record.items() if k not in _SAMPLE_FIELDS}
        return cls(
            id=str(record["id"]),
            method_source=record["method"],
            target_index=int(record["target_index"]),
            target_statement=record["target_statement"],
            target_level=level,
            meta=record.get("meta") or {},
            extras=extras,
        )


def detect_logging_statements(
    stream: TokenStream, logger_pattern: str = DEFAULT_LOGGER_PATTERN
) -> list[StatementSpan]:
    """Statements of shape ``receiver.level(...);`` in stream order.

    The receiver must be a single identifier matching ``logger_pattern`` and
    the call-name one of the six severity names; the span runs through the
    balancing ")" and its trailing ";".  Whether the statement sits at a
    legal insertion point is checked at extraction time, not here.
    """
    pattern = re.compile(logger_pattern, re.IGNORECASE)
    texts = stream.texts
    kinds = [t.kind for t in stream.tokens]
    found = []
    for s in range(len(texts) - 5):
        if kinds[s] != "identifier" or not pattern.search(texts[s]):
            continue
        if texts[s + 1] != "." or kinds[s + 2] != "identifier":
            continue
        if texts[s + 2].lower() not in _LEVEL_NAMES or texts[s + 3] != "(":
            continue
        close = _matching_paren(texts, s + 3)
        if close is None or close + 1 >= len(texts) or texts[close + 1] != ";":
            continue
        found.append(StatementSpan(s, close + 1, ";"))
    return found


def _matching_paren(texts: Sequence[str], open_at: int) -> int | None:
    depth = 0
    for i in range(open_at, len(texts)):
        if texts[i] == "(":
            depth += 1
        elif texts[i] == ")":
            depth -= 1
            if depth == 0:
                return i
    return None


def extract_sample(
    method_source: str,
    span_choice: int,
    *,
    sample_id: str = "sample",
    meta: dict | None = None,
    logger_pattern: str = DEFAULT_LOGGER_PATTERN,
) -> Sample:
    """Remove the span_choice-th detected logging statement from the method.

    The statement's tokens and the whitespace run separating them from the
    preceding token are deleted, so re-inserting the statement after the
    target anchor restores an equivalent method.  Statements whose preceding
    token is not one of ``{ } ; :`` are rejected.
    """
    stream = tokenize(method_source)
    spans = detect_logging_statements(stream, logger_pattern)
    if not 0 <= span_choice < len(spans):
        raise SpanNotDetected(
            f"statement {span_choice} not detected ({len(spans)} candidates)"
        )
    span = spans[span_choice]
    if span.start_index == 0:
        raise PrecedingTokenNotAnchor("logging statement has no preceding token")
    prev = stream.tokens[span.start_index - 1]
    if prev.text not in ANCHOR_TEXTS:
        raise PrecedingTokenNotAnchor(
            f"logging statement follows {prev.text!r}, not an anchor token"
        )
    first = stream.tokens[span.start_index]
    last = stream.tokens[span.end_index]
    statement_text = method_source[first.start : last.end]
    without = method_source[: prev.end] + method_source[last.end :]
    return Sample(
        id=sample_id,
        method_source=without,
        target_index=prev.index,
        target_statement=statement_text,
        target_level=parse_level(statement_text),
        meta=meta or {},
    )


def extract_from_directory(
    src: Path,
    *,
    logger_pattern: str = DEFAULT_LOGGER_PATTERN,
    jobs: int = 1,
) -> tuple[list[Sample], list[str]]:
    """One Sample per detected logging statement across all ``*.java`` files.

    Each file holds one method body.  Methods with several logging statements
    yield one sample per statement, the others left in place.  Returns the
    samples (ordered by path, then span order) and the per-file skip reasons.
    """
    paths = sorted(Path(src).rglob("*.java"))

    def extract_one(path: Path) -> tuple[list[Sample], str | None]:
        source = path.read_text(encoding="utf-8")
        rel = str(path.relative_to(src))
        try:
            count = len(detect_logging_statements(tokenize(source), logger_pattern))
        except UnterminatedLiteral as exc:
            return [], f"{rel}: {exc}"
        samples = []
        for i in range(count):
            try:
                samples.append(
                    extract_sample(
                        source,
                        i,
                        sample_id=f"{rel}#{i}",
                        meta={"path": rel},
                        logger_pattern=logger_pattern,
                    )
                )
            except PrecedingTokenNotAnchor:
                continue
        return samples, None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(extract_one, paths))
    else:
        results = [extract_one(p) for p in paths]
    samples: list[Sample] = []
    skipped: list[str] = []
    for extracted, problem in results:
        samples.extend(extracted)
        if problem:
            skipped.append(problem)
    return samples, skipped


def read_dataset(path: Path) -> list[Sample]:
    samples = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=lineno)
            try:
                samples.append(Sample.from_record(record))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"invalid sample record ({exc})", line=lineno)
    return samples


def write_dataset(samples: Iterable[Sample], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for sample in samples:
            handle.write(json.dumps(sample.to_record(), ensure_ascii=False))
            handle.write("\n")


@dataclass
class CorpusStats:
    count: int
    mean_input_tokens: float
    mean_statement_tokens: float


def corpus_stats(samples: Sequence[Sample]) -> CorpusStats:
    """Arithmetic mean token lengths under this package's lexer."""
    if not samples:
        raise EmptyDataset("no samples to summarize")
    input_lengths = [len(tokenize(s.method_source)) for s in samples]
    statement_lengths = [len(tokenize(s.target_statement)) for s in samples]
    return CorpusStats(
        count=len(samples),
        mean_input_tokens=sum(input_lengths) / len(samples),
        mean_statement_tokens=sum(statement_lengths) / len(samples),
    )


#: Provenance filters recorded alongside mined datasets.  Crawling itself is
#: out of scope; the manifest only documents how a repository set was chosen.
DEFAULT_MANIFEST_FILTERS = {
    "language": "Java",
    "logging_dependency": "log4j",
    "created_from": "2021-09-01",
    "created_to": "2023-05-01",
    "min_stars": 10,
    "exclude_forks": True,
}


def build_manifest(samples: Sequence[Sample], filters: dict | None = None) -> dict:
    stats = corpus_stats(samples)
    return {
        "filters": dict(filters) if filters is not None else dict(DEFAULT_MANIFEST_FILTERS),
        "count": stats.count,
        "mean_input_token_length": stats.mean_input_tokens,
        "mean_target_statement_token_length": stats.mean_statement_tokens,
        "note": "statement detection is heuristic (receiver pattern + severity call)",
    }
