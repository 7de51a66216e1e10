"""HTTP server speaking the loggen backend protocol.

POST /score    {"tokens": [...], "candidate_indices": [...]} -> {"probabilities": [...]}
POST /generate {"tokens": [...], "beam_size": 10}            -> {"candidates": [...]}

Schema violations (wrong types, empty tokens, not exactly one mask) return
400; requests arriving before the model finished loading return 503.  Model
calls are serialized with a lock, so concurrent clients are safe against a
single-threaded model.
"""

from __future__ import annotations

import argparse
import threading

import uvicorn
from fastapi import FastAPI, HTTPException, Request

from .model import MASK_TOKEN, ShimModel


def _bad(reason: str):
    return HTTPException(status_code=400, detail=reason)


async def _read_payload(request: Request) -> dict:
    try:
        payload = await request.json()
    except Exception:
        raise _bad("request body must be valid JSON")
    if not isinstance(payload, dict):
        raise _bad("request body must be a JSON object")
    return payload


def _token_array(payload: dict) -> list[str]:
    tokens = payload.get("tokens")
    if not isinstance(tokens, list) or not tokens:
        raise _bad("tokens must be a non-empty array")
    if any(not isinstance(t, str) for t in tokens):
        raise _bad("tokens must be an array of strings")
    return tokens


def create_app(model: ShimModel | None = None) -> FastAPI:
    """Build the app; with ``model=None`` every model endpoint returns 503
    until a model is attached (see ``attach_model``)."""
    app = FastAPI(title="loggen-shim")
    app.state.model = model
    app.state.lock = threading.Lock()

    def ready_model() -> ShimModel:
        if app.state.model is None:
            raise HTTPException(status_code=503, detail="model is loading")
        return app.state.model

    @app.get("/health")
    async def health():
        return {"status": "ready" if app.state.model is not None else "loading"}

    @app.post("/score")
    async def score(request: Request):
        payload = await _read_payload(request)
        tokens = _token_array(payload)
        candidates = payload.get("candidate_indices", [])
        if not isinstance(candidates, list) or any(
            isinstance(c, bool) or not isinstance(c, int) for c in candidates
        ):
            raise _bad("candidate_indices must be an array of integers")
        if any(not 0 <= c < len(tokens) for c in candidates):
            raise _bad("candidate index outside token range")
        model = ready_model()
        with app.state.lock:
            probabilities = model.score(tokens)
        return {"probabilities": probabilities}

    @app.post("/generate")
    async def generate(request: Request):
        payload = await _read_payload(request)
        tokens = _token_array(payload)
        beam_size = payload.get("beam_size", 10)
        if isinstance(beam_size, bool) or not isinstance(beam_size, int) or beam_size < 1:
            raise _bad("beam_size must be a positive integer")
        masks = sum(1 for t in tokens if t == MASK_TOKEN)
        if masks != 1:
            raise _bad(f"expected exactly one {MASK_TOKEN} token, found {masks}")
        model = ready_model()
        with app.state.lock:
            scored = model.generate(tokens, beam_size)
        return {"candidates": [{"text": text, "score": score} for text, score in scored]}

    return app


def attach_model(app: FastAPI, model: ShimModel) -> None:
    app.state.model = model


def serve(model_dir: str, port: int, host: str = "127.0.0.1") -> None:
    """Start serving immediately; the model loads in the background and the
    endpoints answer 503 until it is ready."""
    app = create_app(None)

    def load():
        attach_model(app, ShimModel.load(model_dir))

    threading.Thread(target=load, daemon=True).start()
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main() -> None:
    parser = argparse.ArgumentParser(description="Serve a model behind the loggen protocol")
    parser.add_argument("--model", required=True, help="checkpoint directory")
    parser.add_argument("--port", type=int, default=8737)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args()
    serve(args.model, args.port, args.host)


if __name__ == "__main__":
    main()
