"""Two-stage generation and insertion of logging statements for Java methods."""

from .backends import (
    MASK_TOKEN,
    Backend,
    Candidate,
    GenerateRequest,
    GenerateResponse,
    HttpBackend,
    ScoreRequest,
    ScoreResponse,
)
from .baseline import BaselineBackend, BaselineModel, load_model, save_model, train
from .chunking import Chunk, ChunkPlan, SplitConfig, merge_scores, plan_chunks, plan_for_policy, render_chunk
from .corpus import Sample, detect_logging_statements, extract_sample, read_dataset, write_dataset
from .errors import LoggenError
from .evalkit import EvalReport, ablate, evaluate
from .javalex import Token, TokenStream, find_anchors, statement_spans, tokenize
from .metrics import Level, LoggingStatement, accuracies, bleu, parse_level, rouge
from .pipeline import (
    InsertionResult,
    PositionPrediction,
    SuggestionSet,
    allocate_budget,
    build_masked_input,
    predict_position,
    run,
    select_mask_chunk,
    suggest,
)

__version__ = "0.1.0"

__all__ = [
    "MASK_TOKEN",
    "Backend",
    "BaselineBackend",
    "BaselineModel",
    "Candidate",
    "Chunk",
    "ChunkPlan",
    "EvalReport",
    "GenerateRequest",
    "GenerateResponse",
    "HttpBackend",
    "InsertionResult",
    "Level",
    "LoggenError",
    "LoggingStatement",
    "PositionPrediction",
    "Sample",
    "ScoreRequest",
    "ScoreResponse",
    "SplitConfig",
    "SuggestionSet",
    "Token",
    "TokenStream",
    "ablate",
    "accuracies",
    "allocate_budget",
    "bleu",
    "build_masked_input",
    "detect_logging_statements",
    "evaluate",
    "extract_sample",
    "find_anchors",
    "load_model",
    "merge_scores",
    "parse_level",
    "plan_chunks",
    "plan_for_policy",
    "predict_position",
    "read_dataset",
    "render_chunk",
    "rouge",
    "run",
    "save_model",
    "select_mask_chunk",
    "statement_spans",
    "suggest",
    "tokenize",
    "train",
    "write_dataset",
]
