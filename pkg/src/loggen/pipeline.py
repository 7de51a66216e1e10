"""Two-stage orchestration: predict where to insert, then generate what.

Stage-1 scores every token through the chunk planner and restricts the
argmax to anchor tokens.  Stage-2 marks the chosen position with the mask
placeholder, sends the chunk containing the mask to the generator, and
splices the top candidate back into the source.  The splice is purely
additive — removing the inserted span reproduces the input byte-exact, for
any backend.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .backends import (
    MASK_TOKEN,
    Backend,
    Candidate,
    GenerateRequest,
    ScoreRequest,
)
from .chunking import SplitConfig, merge_scores, plan_for_policy, render_chunk
from .errors import (
    EmptyPositions,
    GenerationEmpty,
    IndexOutOfRange,
    NoAnchors,
    NoMask,
    ProtocolError,
)
from .javalex import TokenStream, find_anchors, token_texts
from .metrics import LoggingStatement

DEFAULT_BEAM_SIZE = 10
DEFAULT_SUGGESTION_BUDGET = 10
DEFAULT_SUGGESTION_THRESHOLD = 0.01


@dataclass(frozen=True)
class PositionPrediction:
    token_index: int
    probability: float
    ranked_alternatives: tuple[tuple[int, float], ...]  # (index, probability), best first


@dataclass
class InsertionResult:
    output_source: str
    inserted_statement: LoggingStatement
    insertion_token_index: int
    candidates: list[Candidate]
    insertion_offset: int
    inserted_text: str  # newline + indentation + statement, exactly as spliced in
    stage1_seconds: float
    stage2_seconds: float

    @property
    def total_seconds(self) -> float:
        return self.stage1_seconds + self.stage2_seconds

    def without_insertion(self) -> str:
        """Strip exactly the inserted span; must reproduce the input."""
        off = self.insertion_offset
        return self.output_source[:off] + self.output_source[off + len(self.inserted_text):]


@dataclass(frozen=True)
class Suggestion:
    token_index: int
    statement: str
    rank: int  # overall rank across the whole set
    position_rank: int
    beam_rank: int


@dataclass
class SuggestionSet:
    suggestions: list[Suggestion]
    budget: int
    threshold: float


def score_tokens(stream: TokenStream, scorer: Backend, cfg: SplitConfig) -> list[float]:
    """Merged per-token insertion probabilities over the whole stream.

    Long streams are scored chunk by chunk; backends see unpadded content
    (context included) and their context scores are discarded on merge.
    """
    texts = list(stream.texts)
    anchors = set(find_anchors(texts))
    plan = plan_for_policy(texts, cfg)
    rows = []
    for chunk in plan.chunks:
        rendered = render_chunk(texts, chunk, cfg)
        content = list(rendered.tokens[: rendered.content_length])
        lo = chunk.content[0]
        candidates = [i - lo for i in range(*chunk.content) if i in anchors]
        response = scorer.score(ScoreRequest(tokens=content, candidate_indices=candidates))
        if len(response.probabilities) != len(content):
            raise ProtocolError(
                f"scorer returned {len(response.probabilities)} probabilities "
                f"for {len(content)} tokens"
            )
        row = list(response.probabilities) + [0.0] * (plan.model_input_length - len(content))
        rows.append(row)
    return merge_scores(plan, rows)


def predict_position(
    stream: TokenStream, scorer: Backend, cfg: SplitConfig
) -> PositionPrediction:
    """Anchor with the highest merged probability; ties take the earlier one."""
    anchors = find_anchors(stream)
    if not anchors:
        raise NoAnchors("method contains no '{', '}', ';' or ':' token")
    merged = score_tokens(stream, scorer, cfg)
    ranked = sorted(((i, merged[i]) for i in anchors), key=lambda pair: (-pair[1], pair[0]))
    best_index, best_probability = ranked[0]
    return PositionPrediction(
        token_index=best_index,
        probability=best_probability,
        ranked_alternatives=tuple(ranked),
    )


def build_masked_input(tokens: Sequence[str] | TokenStream, token_index: int) -> list[str]:
    """Token texts with one mask placeholder right after token_index."""
    texts = token_texts(tokens)
    if not 0 <= token_index < len(texts):
        raise IndexOutOfRange(
            f"token index {token_index} outside stream of {len(texts)} tokens"
        )
    return texts[: token_index + 1] + [MASK_TOKEN] + texts[token_index + 1 :]


def select_mask_chunk(masked_tokens: Sequence[str], cfg: SplitConfig) -> list[str]:
    """The generator's input window: the chunk whose core holds the mask.

    Short inputs pass through whole.  Under truncate-discard the mask can sit
    past the cutoff; then the window becomes the last L tokens ending at the
    mask so the generator still sees it.
    """
    texts = list(masked_tokens)
    positions = [i for i, t in enumerate(texts) if t == MASK_TOKEN]
    if len(positions) != 1:
        raise NoMask(f"expected exactly one {MASK_TOKEN} token, found {len(positions)}")
    mask_at = positions[0]
    if len(texts) <= cfg.max_model_input_length:
        return texts
    plan = plan_for_policy(texts, cfg)
    for chunk in plan.chunks:
        if chunk.core[0] <= mask_at < chunk.core[1]:
            lo, hi = chunk.content
            return texts[lo:hi]
    lo = max(0, mask_at + 1 - cfg.max_model_input_length)
    return texts[lo : lo + cfg.max_model_input_length]


def insertion_point(stream: TokenStream, token_index: int) -> tuple[int, str]:
    """Character offset after the anchor token and the anchor line's indent."""
    anchor = stream.tokens[token_index]
    line_start = stream.source.rfind("\n", 0, anchor.start) + 1
    indent_end = line_start
    while indent_end < len(stream.source) and stream.source[indent_end] in " \t":
        indent_end += 1
    return anchor.end, stream.source[line_start:indent_end]


def insert_statement(stream: TokenStream, token_index: int, statement: str) -> tuple[str, int, str]:
    """Splice the statement after the anchor on a fresh line, matching the
    anchor line's indentation.  Returns (output, offset, inserted text)."""
    if not 0 <= token_index < len(stream.tokens):
        raise IndexOutOfRange(
            f"token index {token_index} outside stream of {len(stream.tokens)} tokens"
        )
    offset, indent = insertion_point(stream, token_index)
    inserted = "\n" + indent + statement
    output = stream.source[:offset] + inserted + stream.source[offset:]
    return output, offset, inserted


def run(
    stream: TokenStream, scorer: Backend, generator: Backend, cfg: SplitConfig,
    beam_size: int = DEFAULT_BEAM_SIZE,
) -> InsertionResult:
    started = time.perf_counter()
    prediction = predict_position(stream, scorer, cfg)
    stage1 = time.perf_counter() - started

    started = time.perf_counter()
    masked = build_masked_input(stream, prediction.token_index)
    window = select_mask_chunk(masked, cfg)
    response = generator.generate(GenerateRequest(tokens=window, beam_size=beam_size))
    if not response.candidates:
        raise GenerationEmpty("generator returned no candidates")
    statement = response.candidates[0].text
    output, offset, inserted = insert_statement(stream, prediction.token_index, statement)
    stage2 = time.perf_counter() - started

    return InsertionResult(
        output_source=output,
        inserted_statement=LoggingStatement.from_text(statement),
        insertion_token_index=prediction.token_index,
        candidates=list(response.candidates),
        insertion_offset=offset,
        inserted_text=inserted,
        stage1_seconds=stage1,
        stage2_seconds=stage2,
    )


def allocate_budget(position_probs: Sequence[float], budget: int = DEFAULT_SUGGESTION_BUDGET) -> list[int]:
    """Distribute a suggestion budget over positions ranked best-first.

    Passes hand one suggestion to the first p, then p-1, ... positions; the
    pass sizes repeat cyclically until exactly ``budget`` suggestions are
    allocated, truncating the final pass left to right.  Counts come out
    non-increasing in rank.
    """
    p = len(position_probs)
    if p == 0:
        raise EmptyPositions("no positions to allocate suggestions to")
    counts = [0] * p
    allocated = 0
    pass_size = p
    while allocated < budget:
        take = min(pass_size, budget - allocated)
        for i in range(take):
            counts[i] += 1
        allocated += take
        pass_size = pass_size - 1 or p
    return counts


def suggest(
    stream: TokenStream, scorer: Backend, generator: Backend, cfg: SplitConfig,
    budget: int = DEFAULT_SUGGESTION_BUDGET,
    threshold: float = DEFAULT_SUGGESTION_THRESHOLD,
    beam_size: int = DEFAULT_BEAM_SIZE,
) -> SuggestionSet:
    """Multi-candidate mode: spread ``budget`` statements over every anchor
    whose probability clears ``threshold`` (falling back to the argmax anchor
    when none does)."""
    prediction = predict_position(stream, scorer, cfg)
    retained = [(i, p) for i, p in prediction.ranked_alternatives if p >= threshold]
    if not retained:
        retained = [(prediction.token_index, prediction.probability)]
    counts = allocate_budget([p for _, p in retained], budget)
    beam = max(beam_size, counts[0])
    texts = list(stream.texts)
    suggestions: list[Suggestion] = []
    for position_rank, ((index, _), count) in enumerate(zip(retained, counts)):
        if count == 0:
            continue
        window = select_mask_chunk(build_masked_input(texts, index), cfg)
        response = generator.generate(GenerateRequest(tokens=window, beam_size=beam))
        taken: list[str] = []
        for candidate in response.candidates:
            if candidate.text in taken:
                continue
            taken.append(candidate.text)
            if len(taken) == count:
                break
        for beam_rank, statement in enumerate(taken):
            suggestions.append(
                Suggestion(
                    token_index=index,
                    statement=statement,
                    rank=len(suggestions),
                    position_rank=position_rank,
                    beam_rank=beam_rank,
                )
            )
    return SuggestionSet(suggestions=suggestions, budget=budget, threshold=threshold)
