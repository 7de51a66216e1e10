"""Mapping from client-side lexer tokens to model subtoken positions.

The wire protocol ships token text arrays, so the server re-tokenizes each
token text independently and remembers which contiguous subtoken range it
produced.  Per-token scores are pooled from the FIRST subtoken of the range
(common token-classification practice); a token whose range is empty or got
truncated away scores 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class AlignmentMap:
    ranges: tuple[tuple[int, int], ...]  # per token: [start, end) into subtoken_ids
    subtoken_ids: tuple[int, ...]  # content subtokens only, no specials/padding

    def first_subtoken(self, token_index: int) -> int | None:
        start, end = self.ranges[token_index]
        return start if start < end else None


def align_tokens(tokenizer, texts: Sequence[str]) -> AlignmentMap:
    ids: list[int] = []
    ranges: list[tuple[int, int]] = []
    for text in texts:
        piece = tokenizer.encode(text, add_special_tokens=False)
        start = len(ids)
        ids.extend(piece)
        ranges.append((start, len(ids)))
    return AlignmentMap(ranges=tuple(ranges), subtoken_ids=tuple(ids))
