"""Scripted and randomized mock backends shared across the test suite."""

import random

from loggen.backends import (
    Candidate,
    GenerateRequest,
    GenerateResponse,
    ScoreRequest,
    ScoreResponse,
)


class TableScorer:
    """Returns a fixed probability row; only valid for single-chunk streams
    where the scored content is the whole stream."""

    def __init__(self, probabilities):
        self.probabilities = list(probabilities)

    def score(self, request: ScoreRequest) -> ScoreResponse:
        assert len(request.tokens) == len(self.probabilities)
        return ScoreResponse(probabilities=list(self.probabilities))

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        raise NotImplementedError


class TokenKeyedScorer:
    """Probability looked up by token text (default 0); chunking-safe."""

    def __init__(self, table, default=0.0):
        self.table = dict(table)
        self.default = default

    def score(self, request: ScoreRequest) -> ScoreResponse:
        probs = [0.0] * len(request.tokens)
        for i in request.candidate_indices:
            probs[i] = self.table.get(request.tokens[i], self.default)
        return ScoreResponse(probabilities=probs)

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        raise NotImplementedError


class ScaledScorer:
    """Wraps another scorer, multiplying every probability by a constant."""

    def __init__(self, inner, factor):
        self.inner = inner
        self.factor = factor

    def score(self, request: ScoreRequest) -> ScoreResponse:
        base = self.inner.score(request)
        return ScoreResponse(probabilities=[p * self.factor for p in base.probabilities])

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        return self.inner.generate(request)


class RandomBackend:
    """Random candidate probabilities and random (but well-formed) statements."""

    def __init__(self, seed=0):
        self.rng = random.Random(seed)

    def score(self, request: ScoreRequest) -> ScoreResponse:
        probs = [0.0] * len(request.tokens)
        for i in request.candidate_indices:
            probs[i] = self.rng.random()
        return ScoreResponse(probabilities=probs)

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        count = self.rng.randrange(1, request.beam_size + 1)
        scores = sorted((self.rng.random() for _ in range(count)), reverse=True)
        candidates = [
            Candidate(text=f'log.info("event {self.rng.randrange(10_000)}");', score=s)
            for s in scores
        ]
        return GenerateResponse(candidates=candidates)


class ScriptedGenerator:
    """Returns the given statements (best first) regardless of input."""

    def __init__(self, statements, start_score=0.0, step=1.0):
        self.statements = list(statements)
        self.start_score = start_score
        self.step = step
        self.requests = []

    def score(self, request: ScoreRequest) -> ScoreResponse:
        raise NotImplementedError

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        self.requests.append(request)
        picked = self.statements[: request.beam_size]
        return GenerateResponse(
            candidates=[
                Candidate(text=s, score=self.start_score - i * self.step)
                for i, s in enumerate(picked)
            ]
        )


class CombinedBackend:
    def __init__(self, scorer, generator):
        self.scorer = scorer
        self.generator = generator

    def score(self, request: ScoreRequest) -> ScoreResponse:
        return self.scorer.score(request)

    def generate(self, request: GenerateRequest) -> GenerateResponse:
        return self.generator.generate(request)
