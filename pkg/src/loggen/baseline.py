"""Statistical backend: n-gram anchor scorer plus nearest-context retrieval.

No learned weights — the point is a deterministic, trainable stand-in that
lets the whole two-stage pipeline run and be tested offline.  Training on a
corpus and evaluating on that same corpus must score perfectly (the
memorization sanity suite); held-out quality is reported but unconstrained.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .backends import (
    MASK_TOKEN,
    Candidate,
    GenerateRequest,
    GenerateResponse,
    ScoreRequest,
    ScoreResponse,
)
from .corpus import Sample
from .errors import EmptyCorpus, EmptyModel, NoMask
from .javalex import find_anchors, tokenize

DEFAULT_WINDOW = 4
DEFAULT_ALPHA = 1.0


@dataclass
class IndexEntry:
    context: tuple[str, ...]  # tokens within +-window of the insertion point
    statement: str


@dataclass
class BaselineModel:
    window: int = DEFAULT_WINDOW
    alpha: float = DEFAULT_ALPHA
    # context window (suffix of up to `window` tokens ending at an anchor)
    # -> [times a statement followed, times seen]
    ngram_counts: dict[tuple[str, ...], list[int]] = field(default_factory=dict)
    retrieval_index: list[IndexEntry] = field(default_factory=list)


def train(
    corpus: Sequence[Sample],
    window: int = DEFAULT_WINDOW,
    alpha: float = DEFAULT_ALPHA,
) -> BaselineModel:
    """Count, for every anchor context in the corpus, whether the target
    statement followed it; index one retrieval entry per sample."""
    if not corpus:
        raise EmptyCorpus("cannot train a baseline on an empty corpus")
    if window < 1:
        raise ValueError("window must be at least 1")
    if alpha <= 0:
        raise ValueError("smoothing alpha must be positive")
    model = BaselineModel(window=window, alpha=alpha)
    for sample in corpus:
        stream = tokenize(sample.method_source)
        texts = list(stream.texts)
        anchors = find_anchors(stream)
        if sample.target_index not in anchors:
            raise ValueError(
                f"sample {sample.id}: target index {sample.target_index} is not an anchor"
            )
        for anchor in anchors:
            hit = int(anchor == sample.target_index)
            full = texts[max(0, anchor - window + 1) : anchor + 1]
            for w in range(1, len(full) + 1):
                key = tuple(full[-w:])
                counts = model.ngram_counts.setdefault(key, [0, 0])
                counts[0] += hit
                counts[1] += 1
        masked = texts[: sample.target_index + 1] + [MASK_TOKEN] + texts[sample.target_index + 1 :]
        model.retrieval_index.append(
            IndexEntry(context=_mask_context(masked, sample.target_index + 1, window),
                       statement=sample.target_statement)
        )
    return model


def _mask_context(tokens: Sequence[str], mask_pos: int, window: int) -> tuple[str, ...]:
    before = tokens[max(0, mask_pos - window) : mask_pos]
    after = tokens[mask_pos + 1 : mask_pos + 1 + window]
    return tuple(before) + tuple(after)


def score_positions(
    model: BaselineModel, tokens: Sequence[str], candidates: Sequence[int]
) -> list[float]:
    """Laplace-smoothed insertion probability for each candidate position.

    Longest matching context window wins, backing off to shorter suffixes;
    a context unseen at every length falls back to the alpha/(2*alpha) = 0.5
    prior.  Non-candidate positions score 0.
    """
    alpha = model.alpha
    probabilities = [0.0] * len(tokens)
    for position in candidates:
        full = tokens[max(0, position - model.window + 1) : position + 1]
        probability = alpha / (2.0 * alpha)
        for w in range(len(full), 0, -1):
            counts = model.ngram_counts.get(tuple(full[-w:]))
            if counts is not None:
                probability = (counts[0] + alpha) / (counts[1] + 2.0 * alpha)
                break
        probabilities[position] = probability
    return probabilities


def generate_retrieval(
    model: BaselineModel, masked_tokens: Sequence[str], beam_size: int
) -> list[Candidate]:
    """Rank index entries by Jaccard similarity of the context around the
    mask; ties go to the earlier entry.  Returns up to beam_size distinct
    statements, best first."""
    positions = [i for i, t in enumerate(masked_tokens) if t == MASK_TOKEN]
    if len(positions) != 1:
        raise NoMask(f"expected exactly one {MASK_TOKEN} token, found {len(positions)}")
    if not model.retrieval_index:
        raise EmptyModel("retrieval index is empty")
    query = set(_mask_context(masked_tokens, positions[0], model.window))
    scored = []
    for entry_id, entry in enumerate(model.retrieval_index):
        scored.append((-_jaccard(query, set(entry.context)), entry_id))
    scored.sort()
    candidates: list[Candidate] = []
    seen: set[str] = set()
    for negated, entry_id in scored:
        statement = model.retrieval_index[entry_id].statement
        if statement in seen:
            continue
        seen.add(statement)
        candidates.append(Candidate(text=statement, score=-negated))
        if len(candidates) == beam_size:
            break
    return candidates


def _jaccard(a: set[str], b: set[str]) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


class BaselineBackend:
    """Backend-protocol adapter around a trained BaselineModel."""

    def __init__(self, model: BaselineModel):
        self.model = model

    def score(self, request: ScoreRequest) -> ScoreResponse:
        request.validate()
        return ScoreResponse(
            probabilities=score_positions(self.model, request.tokens, request.candidate_indices)
        )

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        request.validate()
        return GenerateResponse(
            candidates=generate_retrieval(self.model, request.tokens, request.beam_size)
        )


def save_model(model: BaselineModel, path: Path) -> None:
    """Single JSON file; entries sorted so identical models are bit-identical."""
    payload = {
        "window": model.window,
        "alpha": model.alpha,
        "ngram_counts": [
            [list(key), counts[0], counts[1]]
            for key, counts in sorted(model.ngram_counts.items())
        ],
        "retrieval_index": [
            {"context": list(entry.context), "statement": entry.statement}
            for entry in model.retrieval_index
        ],
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=1), encoding="utf-8")


def load_model(path: Path) -> BaselineModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return BaselineModel(
        window=payload["window"],
        alpha=payload["alpha"],
        ngram_counts={
            tuple(key): [int(pos), int(total)]
            for key, pos, total in payload["ngram_counts"]
        },
        retrieval_index=[
            IndexEntry(context=tuple(entry["context"]), statement=entry["statement"])
            for entry in payload["retrieval_index"]
        ],
    )
