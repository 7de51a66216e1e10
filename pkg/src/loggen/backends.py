"""Model-backend contract and the JSON-over-HTTP client.

Two calls isolate every learned component behind one interface:

* ``POST /score``    {"tokens": [...], "candidate_indices": [...]}
                     -> {"probabilities": [...]}
* ``POST /generate`` {"tokens": [...], "beam_size": 10}
                     -> {"candidates": [{"text": "...", "score": -1.2}, ...]}

Tokens always travel as text arrays (never joined strings) so a backend can
not re-tokenize inconsistently with the indices computed on the client side.
The mask placeholder is the literal token text ``<mask>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import requests

from .errors import BackendUnavailable, NoMask, ProtocolError

MASK_TOKEN = "<mask>"


@dataclass
class ScoreRequest:
    tokens: list[str]
    candidate_indices: list[int]

    def validate(self) -> None:
        if not self.tokens:
            raise ProtocolError("score request requires at least one token")
        for i in self.candidate_indices:
            if not 0 <= i < len(self.tokens):
                raise ProtocolError(f"candidate index {i} outside token range")

    def to_payload(self) -> dict:
        return {"tokens": list(self.tokens), "candidate_indices": list(self.candidate_indices)}

    @classmethod
    def from_payload(cls, payload: object) -> "ScoreRequest":
        data = _expect_object(payload)
        req = cls(
            tokens=_expect_str_list(data.get("tokens"), "tokens"),
            candidate_indices=_expect_int_list(data.get("candidate_indices"), "candidate_indices"),
        )
        req.validate()
        return req


@dataclass
class ScoreResponse:
    probabilities: list[float]

    def validate(self) -> None:
        for p in self.probabilities:
            if not 0.0 <= p <= 1.0:
                raise ProtocolError(f"probability {p} outside [0, 1]")

    def to_payload(self) -> dict:
        return {"probabilities": list(self.probabilities)}

    @classmethod
    def from_payload(cls, payload: object) -> "ScoreResponse":
        data = _expect_object(payload)
        resp = cls(probabilities=_expect_float_list(data.get("probabilities"), "probabilities"))
        resp.validate()
        return resp


@dataclass
class GenerateRequest:
    tokens: list[str]
    beam_size: int = 10

    def validate(self) -> None:
        if not isinstance(self.beam_size, int) or self.beam_size < 1:
            raise ProtocolError(f"beam_size must be a positive integer, got {self.beam_size!r}")
        masks = sum(1 for t in self.tokens if t == MASK_TOKEN)
        if masks != 1:
            raise NoMask(f"expected exactly one {MASK_TOKEN} token, found {masks}")

    def to_payload(self) -> dict:
        return {"tokens": list(self.tokens), "beam_size": self.beam_size}

    @classmethod
    def from_payload(cls, payload: object) -> "GenerateRequest":
        data = _expect_object(payload)
        beam = data.get("beam_size", 10)
        if isinstance(beam, bool) or not isinstance(beam, int):
            raise ProtocolError("beam_size must be an integer")
        req = cls(tokens=_expect_str_list(data.get("tokens"), "tokens"), beam_size=beam)
        req.validate()
        return req


@dataclass
class Candidate:
    text: str
    score: float


@dataclass
class GenerateResponse:
    candidates: list[Candidate]

    def validate(self, beam_size: int | None = None) -> None:
        if beam_size is not None and len(self.candidates) > beam_size:
            raise ProtocolError(
                f"{len(self.candidates)} candidates exceed beam size {beam_size}"
            )
        scores = [c.score for c in self.candidates]
        if any(b > a for a, b in zip(scores, scores[1:])):
            raise ProtocolError("candidate scores must be non-increasing")

    def to_payload(self) -> dict:
        return {"candidates": [{"text": c.text, "score": c.score} for c in self.candidates]}

    @classmethod
    def from_payload(cls, payload: object) -> "GenerateResponse":
        data = _expect_object(payload)
        raw = data.get("candidates")
        if not isinstance(raw, list) or not raw:
            raise ProtocolError("candidates must be a non-empty array")
        candidates = []
        for item in raw:
            entry = _expect_object(item)
            text = entry.get("text")
            if not isinstance(text, str):
                raise ProtocolError("candidate text must be a string")
            score = entry.get("score")
            if isinstance(score, bool) or not isinstance(score, (int, float)):
                raise ProtocolError("candidate score must be a number")
            candidates.append(Candidate(text=text, score=float(score)))
        resp = cls(candidates=candidates)
        resp.validate()
        return resp


class Backend(Protocol):
    """Anything that can score insertion positions and generate statements."""

    def score(self, request: ScoreRequest) -> ScoreResponse: ...

    def generate(self, request: GenerateRequest) -> GenerateResponse: ...


class HttpBackend:
    """Client for a backend server speaking the wire protocol above.

    One retry on transient failures (connection errors, timeouts, 5xx), then
    BackendUnavailable; the toolkit targets interactive latency and fails
    fast rather than queueing.
    """

    def __init__(self, base_url: str, timeout: float = 10.0, retries: int = 1):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self._session = requests.Session()

    def score(self, request: ScoreRequest) -> ScoreResponse:
        request.validate()
        data = self._post("/score", request.to_payload())
        response = ScoreResponse.from_payload(data)
        if len(response.probabilities) != len(request.tokens):
            raise ProtocolError(
                f"expected {len(request.tokens)} probabilities, got {len(response.probabilities)}"
            )
        return response

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        request.validate()
        data = self._post("/generate", request.to_payload())
        response = GenerateResponse.from_payload(data)
        response.validate(beam_size=request.beam_size)
        return response

    def _post(self, path: str, payload: dict) -> object:
        url = self.base_url + path
        failure: str | None = None
        for _ in range(self.retries + 1):
            try:
                resp = self._session.post(url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                failure = str(exc)
                continue
            if resp.status_code >= 500:
                failure = f"HTTP {resp.status_code}"
                continue
            if resp.status_code != 200:
                raise ProtocolError(
                    f"backend rejected request: HTTP {resp.status_code} {resp.text[:200]}"
                )
            try:
                return resp.json()
            except ValueError:
                raise ProtocolError("backend returned invalid JSON")
        raise BackendUnavailable(f"backend at {self.base_url} unavailable: {failure}")


def _expect_object(payload: object) -> dict:
    if not isinstance(payload, dict):
        raise ProtocolError(f"expected a JSON object, got {type(payload).__name__}")
    return payload


def _expect_str_list(value: object, field: str) -> list[str]:
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise ProtocolError(f"{field} must be an array of strings")
    return value


def _expect_int_list(value: object, field: str) -> list[int]:
    if not isinstance(value, list) or any(
        isinstance(v, bool) or not isinstance(v, int) for v in value
    ):
        raise ProtocolError(f"{field} must be an array of integers")
    return value


def _expect_float_list(value: object, field: str) -> list[float]:
    if not isinstance(value, list) or any(
        isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
    ):
        raise ProtocolError(f"{field} must be an array of numbers")
    return [float(v) for v in value]
