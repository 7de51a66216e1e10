"""Splitting of long token streams into model-sized chunks.

A plan covers the whole stream with contiguous chunk cores; every core may be
flanked by whole neighbouring statements as context, and the per-side context
is capped at ``(L - m) // 2`` tokens so a rendered chunk never exceeds the
model input length L.  Context positions are for conditioning only — their
scores are discarded when per-chunk results are merged back onto the stream.

Besides the default strategy there are three ablation policies:

* ``truncate-discard`` — score only the first L tokens, everything past the
  cutoff keeps probability 0.
* ``truncate-split``  — consecutive cores of exactly L tokens, no context.
* ``average-split``   — even split into cores of at most m (``plan_chunks``
  with zero context statements).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

from .errors import InvalidConfig, ShapeMismatch, UnknownPolicy
from .javalex import (
    TokensLike,
    nearest_terminator_end,
    statement_spans,
    terminator_ends,
    token_texts,
)

TRUNCATE_DISCARD = "truncate-discard"
TRUNCATE_SPLIT = "truncate-split"
AVERAGE_SPLIT = "average-split"
AVERAGE_SPLIT_STATEMENT = "average-split-statement"

POLICIES = (TRUNCATE_DISCARD, TRUNCATE_SPLIT, AVERAGE_SPLIT, AVERAGE_SPLIT_STATEMENT)

PAD_TOKEN = "<pad>"

_POLICY_NAME_RE = re.compile(
    r"^average-split(?:-(?P<m>\d+))?(?P<stmt>-statement(?:-(?P<k>\d+))?)?$"
)


@dataclass(frozen=True)
class SplitConfig:
    max_model_input_length: int = 512
    max_chunk_length: int = 300
    context_statements: int = 5
    policy: str = AVERAGE_SPLIT_STATEMENT
    pad_symbol: str = PAD_TOKEN

    def validate(self) -> None:
        if self.max_chunk_length <= 0:
            raise InvalidConfig("max_chunk_length must be positive")
        if self.max_chunk_length > self.max_model_input_length:
            raise InvalidConfig(
                "max_chunk_length exceeds max_model_input_length "
                f"({self.max_chunk_length} > {self.max_model_input_length})"
            )
        if self.context_statements < 0:
            raise InvalidConfig("context_statements must be non-negative")
        if self.policy not in POLICIES:
            raise UnknownPolicy(f"unknown splitting policy {self.policy!r}")

    @property
    def context_budget(self) -> int:
        """Per-side token budget for context statements."""
        return (self.max_model_input_length - self.max_chunk_length) // 2


@dataclass(frozen=True)
class Chunk:
    core: tuple[int, int]  # [start, end)
    left_context: tuple[int, int]
    right_context: tuple[int, int]
    ordinal: int

    @property
    def content(self) -> tuple[int, int]:
        return (self.left_context[0], self.right_context[1])

    @property
    def content_length(self) -> int:
        return self.right_context[1] - self.left_context[0]


@dataclass(frozen=True)
class ChunkPlan:
    chunks: tuple[Chunk, ...]
    total_tokens: int
    model_input_length: int
    policy: str


@dataclass(frozen=True)
class RenderedChunk:
    tokens: tuple[str, ...]  # exactly model_input_length entries, right-padded
    core_mask: tuple[bool, ...]
    content_length: int


def parse_policy_name(name: str, base: SplitConfig | None = None) -> SplitConfig:
    """Resolve a strategy name like ``average-split-300-statement-5``.

    Numbers embedded in the name override the base config; a bare
    ``average-split`` keeps the base chunk length but drops context.
    ``truncated-split`` is accepted as an alias of ``truncate-split``.
    """
    cfg = base or SplitConfig()
    if name == TRUNCATE_DISCARD:
        return replace(cfg, policy=TRUNCATE_DISCARD)
    if name in (TRUNCATE_SPLIT, "truncated-split"):
        return replace(cfg, policy=TRUNCATE_SPLIT)
    match = _POLICY_NAME_RE.match(name)
    if not match:
        raise UnknownPolicy(f"unknown splitting policy {name!r}")
    m = int(match.group("m")) if match.group("m") else cfg.max_chunk_length
    if match.group("stmt"):
        k = int(match.group("k")) if match.group("k") else cfg.context_statements
        return replace(cfg, policy=AVERAGE_SPLIT_STATEMENT, max_chunk_length=m, context_statements=k)
    return replace(cfg, policy=AVERAGE_SPLIT, max_chunk_length=m)


def plan_chunks(tokens: TokensLike, cfg: SplitConfig) -> ChunkPlan:
    """Even split with statement-boundary snapping and statement context.

    Inputs of at most L tokens become a single context-free chunk.  Longer
    inputs are split into ceil(N/m) chunks at ideal boundaries
    ``round(i*N/c)``; each boundary is snapped backward to the nearest
    statement end inside the chunk so cores stay statement-complete wherever
    the input allows, and never exceed m.
    """
    cfg.validate()
    texts = token_texts(tokens)
    n = len(texts)
    if n <= cfg.max_model_input_length:
        chunk = Chunk(core=(0, n), left_context=(0, 0), right_context=(n, n), ordinal=0)
        return ChunkPlan((chunk,), n, cfg.max_model_input_length, cfg.policy)
    cores = _split_cores(texts, n, cfg.max_chunk_length)
    chunks = _attach_contexts(texts, cores, cfg)
    return ChunkPlan(tuple(chunks), n, cfg.max_model_input_length, cfg.policy)


def plan_for_policy(tokens: TokensLike, cfg: SplitConfig) -> ChunkPlan:
    """Dispatch on cfg.policy, covering the ablation strategies."""
    cfg.validate()
    texts = token_texts(tokens)
    n = len(texts)
    L = cfg.max_model_input_length
    if cfg.policy == TRUNCATE_DISCARD:
        end = min(n, L)
        chunk = Chunk(core=(0, end), left_context=(0, 0), right_context=(end, end), ordinal=0)
        return ChunkPlan((chunk,), n, L, cfg.policy)
    if cfg.policy == TRUNCATE_SPLIT:
        chunks = []
        for ordinal, start in enumerate(range(0, n, L)):
            end = min(start + L, n)
            chunks.append(Chunk((start, end), (start, start), (end, end), ordinal))
        return ChunkPlan(tuple(chunks), n, L, cfg.policy)
    if cfg.policy == AVERAGE_SPLIT:
        return plan_chunks(texts, replace(cfg, context_statements=0))
    if cfg.policy == AVERAGE_SPLIT_STATEMENT:
        return plan_chunks(texts, cfg)
    raise UnknownPolicy(f"unknown splitting policy {cfg.policy!r}")


def render_chunk(tokens: TokensLike, chunk: Chunk, cfg: SplitConfig) -> RenderedChunk:
    """Fixed-length model input: left context + core + right context + padding."""
    texts = token_texts(tokens)
    L = cfg.max_model_input_length
    lo, hi = chunk.content
    content = texts[lo:hi]
    pad = L - len(content)
    core_lo = chunk.core[0] - lo
    core_hi = chunk.core[1] - lo
    mask = [core_lo <= p < core_hi for p in range(len(content))]
    return RenderedChunk(
        tokens=tuple(content) + (cfg.pad_symbol,) * pad,
        core_mask=tuple(mask) + (False,) * pad,
        content_length=len(content),
    )


def merge_scores(plan: ChunkPlan, per_chunk_scores: list[list[float]]) -> list[float]:
    """Collapse per-chunk score rows onto the original token indices.

    Each row must align with its rendered chunk (length exactly L).  Every
    token index takes its score from the chunk whose core contains it;
    context and padding scores are dropped.  Indices no chunk covers (only
    possible under truncate-discard) keep probability 0 so the downstream
    argmax stays well-defined.
    """
    if len(per_chunk_scores) != len(plan.chunks):
        raise ShapeMismatch(
            f"{len(per_chunk_scores)} score rows for {len(plan.chunks)} chunks"
        )
    merged = [0.0] * plan.total_tokens
    for chunk, scores in zip(plan.chunks, per_chunk_scores):
        if len(scores) != plan.model_input_length:
            raise ShapeMismatch(
                f"chunk {chunk.ordinal}: expected {plan.model_input_length} scores, "
                f"got {len(scores)}"
            )
        offset = chunk.core[0] - chunk.left_context[0]
        for i in range(chunk.core[0], chunk.core[1]):
            merged[i] = scores[offset + (i - chunk.core[0])]
    return merged


def _round_half_up_ratio(num: int, den: int) -> int:
    # floor(num/den + 1/2) in exact integer arithmetic
    return (2 * num + den) // (2 * den)


def _split_cores(texts: list[str], n: int, m: int) -> list[tuple[int, int]]:
    ends = terminator_ends(texts)
    c = math.ceil(n / m)
    cores: list[tuple[int, int]] = []
    start = 0
    j = 1
    while start < n:
        if j < c:
            target = min(start + m, _round_half_up_ratio(j * n, c))
        else:
            # past the planned boundary count (heavy snapping): march by m
            target = min(start + m, n)
        target = max(target, start + 1)
        if target >= n:
            end = n
        else:
            snapped = nearest_terminator_end(ends, lo=start, hi=target)
            end = snapped if snapped is not None else target
        cores.append((start, end))
        start = end
        j += 1
    return cores


def _attach_contexts(
    texts: list[str], cores: list[tuple[int, int]], cfg: SplitConfig
) -> list[Chunk]:
    spans = [sp for sp in statement_spans(texts) if sp.complete]
    by_end = {sp.end_index + 1: sp for sp in spans}
    by_start = {sp.start_index: sp for sp in spans}
    budget = cfg.context_budget
    k = cfg.context_statements
    chunks = []
    for ordinal, (s, e) in enumerate(cores):
        cur, used = s, 0
        for _ in range(k):
            span = by_end.get(cur)
            if span is None or used + len(span) > budget:
                break
            cur = span.start_index
            used += len(span)
        left = cur
        cur, used = e, 0
        for _ in range(k):
            span = by_start.get(cur)
            if span is None or used + len(span) > budget:
                break
            cur = span.end_index + 1
            used += len(span)
        chunks.append(Chunk((s, e), (left, s), (e, cur), ordinal))
    return chunks
