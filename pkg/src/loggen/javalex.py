"""Flat lexer for Java method source.

Every character of the input ends up either in exactly one token or in the
whitespace/comment gap between tokens, so a stream can always be reassembled
byte-for-byte.  No grammar awareness: generics, lambdas and annotations are
lexed as plain operator/punctuation tokens.  The lexer is deliberately
lenient — any symbol it does not recognise becomes a one-character operator
token — the only fatal inputs are unterminated literals and block comments.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import UnterminatedLiteral

# The only tokens a logging statement may follow.
ANCHOR_TEXTS = ("{", "}", ";", ":")
# The only tokens that end a complete statement ("{" opens one instead).
TERMINATOR_TEXTS = (";", "}")

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

# Longest first so maximal munch falls out of a linear scan.
_MULTI_OPERATORS = (
    ">>>=",
    ">>>", "<<=", ">>=", "...",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "<<", ">>", "->", "::",
)

_PUNCTUATION = frozenset("(){}[];,.:") | {"..."}

_ASCII_DIGITS = frozenset("0123456789")

_NUMBER_RE = re.compile(
    r"0[xX][0-9A-Fa-f_]+(?:\.[0-9A-Fa-f_]*)?(?:[pP][+-]?[0-9_]+)?[fFdDlL]?"
    r"|0[bB][01_]+[lL]?"
    r"|(?:\d[\d_]*(?:\.[\d_]*)?|\.\d[\d_]*)(?:[eE][+-]?[\d_]+)?[fFdDlL]?"
)


@dataclass(frozen=True)
class Token:
    text: str
    index: int
    start: int
    end: int
    kind: str  # identifier | keyword | number-literal | string-literal | char-literal | operator | punctuation | annotation-marker

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class TokenStream:
    source: str
    tokens: tuple[Token, ...]
    gaps: tuple[str, ...]  # len(tokens) + 1 slices; gaps[i] precedes tokens[i]

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def reconstruct(self) -> str:
        parts = [self.gaps[0]]
        for token, gap in zip(self.tokens, self.gaps[1:]):
            parts.append(token.text)
            parts.append(gap)
        return "".join(parts)


@dataclass(frozen=True)
class StatementSpan:
    start_index: int
    end_index: int  # inclusive
    terminator: str | None  # ";" or "}"; None marks the trailing incomplete span

    @property
    def complete(self) -> bool:
        return self.terminator is not None

    def __len__(self) -> int:
        return self.end_index - self.start_index + 1


TokensLike = Union[TokenStream, Sequence[str]]


def token_texts(tokens: TokensLike) -> list[str]:
    """Accept either a TokenStream or a plain sequence of token texts."""
    if isinstance(tokens, TokenStream):
        return list(tokens.texts)
    return list(tokens)


def reconstruct(stream: TokenStream) -> str:
    return stream.reconstruct()


def tokenize(source: str) -> TokenStream:
    tokens: list[Token] = []
    gaps: list[str] = []
    i = 0
    n = len(source)
    while True:
        gap_start = i
        i = _skip_gap(source, i)
        gaps.append(source[gap_start:i])
        if i >= n:
            break
        start = i
        ch = source[i]
        if ch == '"':
            end = _scan_string(source, i)
            kind = "string-literal"
        elif ch == "'":
            end = _scan_char(source, i)
            kind = "char-literal"
        elif ch in _ASCII_DIGITS or (ch == "." and i + 1 < n and source[i + 1] in _ASCII_DIGITS):
            end = _NUMBER_RE.match(source, i).end()
            kind = "number-literal"
        elif ch == "_" or ch == "$" or ch.isalpha():
            end = _scan_identifier(source, i)
            word = source[i:end]
            kind = "keyword" if word in KEYWORDS else "identifier"
        elif ch == "@":
            end = i + 1
            kind = "annotation-marker"
        else:
            end = _scan_operator(source, i)
            text = source[i:end]
            kind = "punctuation" if text in _PUNCTUATION else "operator"
        tokens.append(Token(source[start:end], len(tokens), start, end, kind))
        i = end
    return TokenStream(source=source, tokens=tuple(tokens), gaps=tuple(gaps))


def find_anchors(tokens: TokensLike) -> list[int]:
    """Indices of the tokens after which a logging statement may be inserted."""
    anchors = set(ANCHOR_TEXTS)
    return [i for i, text in enumerate(token_texts(tokens)) if text in anchors]


def statement_spans(tokens: TokensLike) -> list[StatementSpan]:
    """Partition token indices into statements ending at ";" or "}".

    A trailing remainder with no terminator becomes one final span with
    ``terminator=None``.
    """
    texts = token_texts(tokens)
    terminators = set(TERMINATOR_TEXTS)
    spans: list[StatementSpan] = []
    start = 0
    for i, text in enumerate(texts):
        if text in terminators:
            spans.append(StatementSpan(start, i, text))
            start = i + 1
    if start < len(texts):
        spans.append(StatementSpan(start, len(texts) - 1, None))
    return spans


def terminator_ends(tokens: TokensLike) -> list[int]:
    """Sorted exclusive-end positions just past each ";" or "}" token."""
    terminators = set(TERMINATOR_TEXTS)
    return [i + 1 for i, text in enumerate(token_texts(tokens)) if text in terminators]


def nearest_terminator_end(ends: Sequence[int], lo: int, hi: int) -> int | None:
    """Largest terminator end e with lo < e <= hi, or None."""
    idx = bisect_right(ends, hi) - 1
    if idx >= 0 and ends[idx] > lo:
        return ends[idx]
    return None


def _skip_gap(source: str, i: int) -> int:
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
        elif source.startswith("//", i):
            nl = source.find("\n", i)
            i = n if nl < 0 else nl
        elif source.startswith("/*", i):
            close = source.find("*/", i + 2)
            if close < 0:
                raise UnterminatedLiteral("unterminated block comment", i)
            i = close + 2
        else:
            break
    return i


def _scan_string(source: str, i: int) -> int:
    if source.startswith('"""', i):
        return _scan_text_block(source, i)
    n = len(source)
    j = i + 1
    while j < n:
        ch = source[j]
        if ch == "\\":
            j += 2
            continue
        if ch == "\n":
            break
        if ch == '"':
            return j + 1
        j += 1
    raise UnterminatedLiteral("unterminated string literal", i)


def _scan_text_block(source: str, i: int) -> int:
    j = i + 3
    n = len(source)
    while j < n:
        if source[j] == "\\":
            j += 2
            continue
        if source.startswith('"""', j):
            return j + 3
        j += 1
    raise UnterminatedLiteral("unterminated text block", i)


def _scan_char(source: str, i: int) -> int:
    n = len(source)
    j = i + 1
    while j < n:
        ch = source[j]
        if ch == "\\":
            j += 2
            continue
        if ch == "\n":
            break
        if ch == "'":
            return j + 1
        j += 1
    raise UnterminatedLiteral("unterminated char literal", i)


def _scan_identifier(source: str, i: int) -> int:
    n = len(source)
    j = i + 1
    while j < n:
        ch = source[j]
        if ch == "_" or ch == "$" or ch.isalnum():
            j += 1
        else:
            break
    return j


def _scan_operator(source: str, i: int) -> int:
    for op in _MULTI_OPERATORS:
        if source.startswith(op, i):
            return i + len(op)
    return i + 1
