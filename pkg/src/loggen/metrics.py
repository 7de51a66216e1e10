"""Quality metrics for generated logging statements.

Accuracy is judged per aspect: the insertion position (token index), the
severity level, and the message (the statement's token sequence with the
level call-name canonicalized so the two aspects stay independent).  Text
similarity uses sentence-level BLEU-1..4 / aggregate BLEU and ROUGE-1/2/L,
all on a 0-100 scale.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyReference, LengthMismatch, UnterminatedLiteral
from .javalex import tokenize

#: Placeholder substituted for the level call-name when comparing messages.
LEVEL_PLACEHOLDER = "<level>"


class Level(enum.Enum):
    """Severity levels ranked by ordinal severity."""

    TRACE = 1
    DEBUG = 2
    INFO = 3
    WARN = 4
    ERROR = 5
    FATAL = 6


_LEVEL_NAMES = {level.name.lower(): level for level in Level}


def statement_tokens(statement: str) -> list[str]:
    """Token texts of a statement; falls back to whitespace splitting when the
    text does not lex (backends can produce malformed output)."""
    try:
        return list(tokenize(statement).texts)
    except UnterminatedLiteral:
        return statement.split()


def parse_level(statement: str) -> Level | None:
    """Level of the first call-name token matching a severity name.

    A call-name is an identifier immediately followed by "(" — this skips
    receivers, string contents and unrelated identifiers.  Returns None when
    no severity call is present.
    """
    tokens = statement_tokens(statement)
    for text, following in zip(tokens, tokens[1:]):
        if following == "(" and text.lower() in _LEVEL_NAMES:
            return _LEVEL_NAMES[text.lower()]
    return None


def message_tokens(statement: str) -> list[str]:
    """Statement token sequence with the level call-name canonicalized."""
    tokens = statement_tokens(statement)
    out = list(tokens)
    for i, (text, following) in enumerate(zip(tokens, tokens[1:])):
        if following == "(" and text.lower() in _LEVEL_NAMES:
            out[i] = LEVEL_PLACEHOLDER
            break
    return out


@dataclass(frozen=True)
class LoggingStatement:
    raw_text: str
    tokens: tuple[str, ...]
    level: Level | None
    message_tokens: tuple[str, ...]

    @classmethod
    def from_text(cls, text: str) -> "LoggingStatement":
        return cls(
            raw_text=text,
            tokens=tuple(statement_tokens(text)),
            level=parse_level(text),
            message_tokens=tuple(message_tokens(text)),
        )


def accuracies(
    predictions: Sequence[tuple[int, str]], targets: Sequence[tuple[int, str]]
) -> tuple[float, float, float, float]:
    """Percentage of samples with the correct position / level / message and
    the conjunction of all three.  Each entry is (anchor index, statement)."""
    if len(predictions) != len(targets):
        raise LengthMismatch(f"{len(predictions)} predictions for {len(targets)} targets")
    if not predictions:
        return (0.0, 0.0, 0.0, 0.0)
    pos = lvl = msg = all3 = 0
    for (pi, ps), (ti, ts) in zip(predictions, targets):
        p_ok = pi == ti
        l_ok = parse_level(ps) == parse_level(ts)
        m_ok = message_tokens(ps) == message_tokens(ts)
        pos += p_ok
        lvl += l_ok
        msg += m_ok
        all3 += p_ok and l_ok and m_ok
    n = len(predictions)
    return (100.0 * pos / n, 100.0 * lvl / n, 100.0 * msg / n, 100.0 * all3 / n)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _clipped_matches(hyp: Sequence[str], ref: Sequence[str], n: int) -> tuple[int, int, int]:
    hyp_counts = _ngram_counts(hyp, n)
    ref_counts = _ngram_counts(ref, n)
    matches = sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())
    return matches, sum(hyp_counts.values()), sum(ref_counts.values())


def bleu(hypothesis: Sequence[str], reference: Sequence[str]) -> tuple[float, list[float]]:
    """(aggregate BLEU, [BLEU-1..BLEU-4]) on a 0-100 scale.

    BLEU-n is the modified n-gram precision.  The aggregate is the brevity
    penalty times the geometric mean of precisions 1..4 where orders above 1
    with zero matches get add-one smoothing — without it the short sequences
    typical of log statements would zero out the whole score.  Orders longer
    than both sequences count as a perfect match so identical inputs always
    score 100.
    """
    hyp = list(hypothesis)
    ref = list(reference)
    if not ref:
        raise EmptyReference("BLEU reference must be non-empty")
    per_order: list[float] = []
    smoothed: list[float] = []
    for n in range(1, 5):
        matches, hyp_total, ref_total = _clipped_matches(hyp, ref, n)
        if hyp_total > 0:
            per_order.append(100.0 * matches / hyp_total)
        else:
            per_order.append(100.0 if ref_total == 0 and hyp == ref else 0.0)
        if n == 1:
            smoothed.append(matches / hyp_total if hyp_total else 0.0)
        elif matches == 0:
            smoothed.append((matches + 1.0) / (hyp_total + 1.0))
        else:
            smoothed.append(matches / hyp_total)
    if not hyp or smoothed[0] == 0.0:
        return 0.0, per_order
    brevity = 1.0 if len(hyp) >= len(ref) else math.exp(1.0 - len(ref) / len(hyp))
    aggregate = 100.0 * brevity * math.exp(sum(math.log(p) for p in smoothed) / 4.0)
    return aggregate, per_order


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge(hypothesis: Sequence[str], reference: Sequence[str]) -> tuple[float, float, float]:
    """(ROUGE-1, ROUGE-2, ROUGE-L) F1 scores on a 0-100 scale.

    ROUGE-n uses clipped n-gram overlap; ROUGE-L uses the longest common
    subsequence.  When neither side has an n-gram of the required order the
    score degenerates to exact-match (100 for identical sequences, else 0).
    """
    hyp = list(hypothesis)
    ref = list(reference)
    if not ref:
        raise EmptyReference("ROUGE reference must be non-empty")
    scores = []
    for n in (1, 2):
        matches, hyp_total, ref_total = _clipped_matches(hyp, ref, n)
        if hyp_total == 0 and ref_total == 0:
            scores.append(100.0 if hyp == ref else 0.0)
        elif hyp_total == 0 or ref_total == 0:
            scores.append(0.0)
        else:
            scores.append(100.0 * _f1(matches / hyp_total, matches / ref_total))
    lcs = _lcs_length(hyp, ref)
    if not hyp:
        scores.append(0.0)
    else:
        scores.append(100.0 * _f1(lcs / len(hyp), lcs / len(ref)))
    return scores[0], scores[1], scores[2]


def level_distance(predicted: Level, target: Level) -> int:
    """Absolute difference of the ordinal severity ranks; 0 means correct."""
    return abs(predicted.value - target.value)


def position_distance(predicted: int, target: int) -> int:
    """Absolute difference of the predicted and target token indices."""
    return abs(predicted - target)


LEVEL_BUCKETS = ("0", "1", "2", ">2")
POSITION_BUCKETS = (
    "<=10", "11-20", "21-30", "31-40", "41-50",
    "51-60", "61-70", "71-80", "81-90", "91-100", ">100",
)


def level_bucket(distance: int | None) -> str:
    """Histogram bucket; an unparseable predicted level lands in ">2"."""
    if distance is None or distance > 2:
        return ">2"
    return str(distance)


def position_bucket(distance: int) -> str:
    if distance <= 10:
        return "<=10"
    if distance > 100:
        return ">100"
    lo = ((distance - 1) // 10) * 10 + 1
    return f"{lo}-{lo + 9}"
