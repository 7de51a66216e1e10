import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loggen.backends import (
    MASK_TOKEN,
    Candidate,
    GenerateRequest,
    GenerateResponse,
    HttpBackend,
    ScoreRequest,
    ScoreResponse,
)
from loggen.errors import BackendUnavailable, NoMask, ProtocolError


class TestValidation:
    def test_empty_tokens_rejected(self):
        with pytest.raises(ProtocolError):
            ScoreRequest(tokens=[], candidate_indices=[]).validate()

    def test_candidate_out_of_range(self):
        with pytest.raises(ProtocolError):
            ScoreRequest(tokens=["a"], candidate_indices=[1]).validate()

    def test_probability_out_of_range(self):
        with pytest.raises(ProtocolError):
            ScoreResponse(probabilities=[1.5]).validate()

    def test_generate_requires_exactly_one_mask(self):
        with pytest.raises(NoMask):
            GenerateRequest(tokens=["a", "b"]).validate()
        with pytest.raises(NoMask):
            GenerateRequest(tokens=[MASK_TOKEN, MASK_TOKEN]).validate()
        GenerateRequest(tokens=["a", MASK_TOKEN]).validate()

    def test_generate_beam_must_be_positive(self):
        with pytest.raises(ProtocolError):
            GenerateRequest(tokens=[MASK_TOKEN], beam_size=0).validate()

    def test_candidates_must_be_ranked(self):
        response = GenerateResponse(
            candidates=[Candidate("a;", -1.0), Candidate("b;", -0.5)]
        )
        with pytest.raises(ProtocolError):
            response.validate()

    def test_beam_bound_enforced(self):
        response = GenerateResponse(candidates=[Candidate("a;", 0.0), Candidate("b;", -1.0)])
        with pytest.raises(ProtocolError):
            response.validate(beam_size=1)

    def test_decode_rejects_empty_candidates(self):
        with pytest.raises(ProtocolError):
            GenerateResponse.from_payload({"candidates": []})

    def test_decode_rejects_bad_shapes(self):
        with pytest.raises(ProtocolError):
            ScoreRequest.from_payload({"tokens": "ab", "candidate_indices": []})
        with pytest.raises(ProtocolError):
            ScoreRequest.from_payload([1, 2])
        with pytest.raises(ProtocolError):
            ScoreResponse.from_payload({"probabilities": ["x"]})
        with pytest.raises(ProtocolError):
            GenerateRequest.from_payload({"tokens": [MASK_TOKEN], "beam_size": "10"})


token_text = st.text(min_size=1, max_size=8)


class TestRoundTrip:
    @given(st.lists(token_text, min_size=1, max_size=20), st.data())
    @settings(max_examples=100)
    def test_score_request_round_trips(self, tokens, data):
        indices = data.draw(
            st.lists(st.integers(0, len(tokens) - 1), unique=True, max_size=len(tokens))
        )
        req = ScoreRequest(tokens=tokens, candidate_indices=indices)
        decoded = ScoreRequest.from_payload(json.loads(json.dumps(req.to_payload())))
        assert decoded == req

    @given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=20))
    @settings(max_examples=100)
    def test_score_response_round_trips(self, probabilities):
        resp = ScoreResponse(probabilities=probabilities)
        decoded = ScoreResponse.from_payload(json.loads(json.dumps(resp.to_payload())))
        assert decoded == resp

    @given(st.lists(token_text, max_size=10), st.integers(1, 20))
    @settings(max_examples=100)
    def test_generate_request_round_trips(self, tokens, beam):
        req = GenerateRequest(tokens=tokens + [MASK_TOKEN], beam_size=beam)
        decoded = GenerateRequest.from_payload(json.loads(json.dumps(req.to_payload())))
        assert decoded == req

    @given(
        st.lists(
            st.tuples(st.text(min_size=1, max_size=20), st.floats(-50, 0, allow_nan=False)),
            min_size=1,
            max_size=10,
        )
    )
    @settings(max_examples=100)
    def test_generate_response_round_trips(self, raw):
        raw.sort(key=lambda pair: -pair[1])
        resp = GenerateResponse(candidates=[Candidate(t, s) for t, s in raw])
        decoded = GenerateResponse.from_payload(json.loads(json.dumps(resp.to_payload())))
        assert decoded == resp


def serve(behavior):
    """Spin up a one-off HTTP server; behavior(path, payload) -> (status, body)."""

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            payload = json.loads(self.rfile.read(length) or b"{}")
            status, body = behavior(self.path, payload)
            data = body.encode() if isinstance(body, str) else json.dumps(body).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, f"http://127.0.0.1:{server.server_address[1]}"


class TestHttpBackend:
    def test_score_and_generate_round_trip(self):
        def behavior(path, payload):
            if path == "/score":
                return 200, {"probabilities": [0.25] * len(payload["tokens"])}
            return 200, {"candidates": [{"text": 'log.info("x");', "score": -0.5}]}

        server, url = serve(behavior)
        try:
            backend = HttpBackend(url, timeout=5.0)
            score = backend.score(ScoreRequest(tokens=["a", ";"], candidate_indices=[1]))
            assert score.probabilities == [0.25, 0.25]
            gen = backend.generate(GenerateRequest(tokens=["a", ";", MASK_TOKEN]))
            assert gen.candidates[0].text == 'log.info("x");'
        finally:
            server.shutdown()

    def test_retries_transient_500_once(self):
        calls = []

        def behavior(path, payload):
            calls.append(path)
            if len(calls) == 1:
                return 500, {"error": "warming up"}
            return 200, {"probabilities": [0.5]}

        server, url = serve(behavior)
        try:
            backend = HttpBackend(url, timeout=5.0)
            resp = backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))
            assert resp.probabilities == [0.5]
            assert len(calls) == 2
        finally:
            server.shutdown()

    def test_persistent_failure_becomes_unavailable(self):
        def behavior(path, payload):
            return 503, {"error": "down"}

        server, url = serve(behavior)
        try:
            backend = HttpBackend(url, timeout=5.0)
            with pytest.raises(BackendUnavailable):
                backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))
        finally:
            server.shutdown()

    def test_connection_refused_becomes_unavailable(self):
        server, url = serve(lambda path, payload: (200, {}))
        server.shutdown()
        server.server_close()
        backend = HttpBackend(url, timeout=0.5)
        with pytest.raises(BackendUnavailable):
            backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))

    def test_client_error_is_protocol_error(self):
        server, url = serve(lambda path, payload: (400, {"error": "bad request"}))
        try:
            backend = HttpBackend(url, timeout=5.0)
            with pytest.raises(ProtocolError):
                backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))
        finally:
            server.shutdown()

    def test_shape_mismatch_is_protocol_error(self):
        server, url = serve(lambda path, payload: (200, {"probabilities": [0.5, 0.5, 0.5]}))
        try:
            backend = HttpBackend(url, timeout=5.0)
            with pytest.raises(ProtocolError):
                backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))
        finally:
            server.shutdown()

    def test_invalid_json_is_protocol_error(self):
        server, url = serve(lambda path, payload: (200, "not json {"))
        try:
            backend = HttpBackend(url, timeout=5.0)
            with pytest.raises(ProtocolError):
                backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))
        finally:
            server.shutdown()

    def test_timeout_becomes_unavailable(self):
        def behavior(path, payload):
            time.sleep(1.0)
            return 200, {"probabilities": [0.5]}

        server, url = serve(behavior)
        try:
            backend = HttpBackend(url, timeout=0.15)
            started = time.perf_counter()
            with pytest.raises(BackendUnavailable):
                backend.score(ScoreRequest(tokens=["a"], candidate_indices=[0]))
            assert time.perf_counter() - started < 2.0
        finally:
            server.shutdown()
