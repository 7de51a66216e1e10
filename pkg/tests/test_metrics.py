import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loggen.errors import EmptyReference, LengthMismatch
from loggen.metrics import (
    LEVEL_BUCKETS,
    LEVEL_PLACEHOLDER,
    POSITION_BUCKETS,
    Level,
    LoggingStatement,
    accuracies,
    bleu,
    level_bucket,
    level_distance,
    message_tokens,
    parse_level,
    position_bucket,
    position_distance,
    rouge,
)
from oracles import bleu_oracle, rouge_oracle

# (name, hypothesis, reference, aggregate BLEU, [BLEU-1..4], (ROUGE-1, ROUGE-2, ROUGE-L))
# Expected values were computed with the brute-force oracle in oracles.py and
# frozen; fractions are on the raw [0, 1] scale.
METRIC_FIXTURES = [
    ("identity long",
     ["log", ".", "info", "(", '"start"', ")", ";"],
     ["log", ".", "info", "(", '"start"', ")", ";"],
     1.0, [1.0, 1.0, 1.0, 1.0], (1.0, 1.0, 1.0)),
    ("one substitution",
     ["a", "b", "c"], ["a", "b", "d"],
     0.6389431042462724, [0.6666666666666666, 0.5, 0.0, 0.0],
     (0.6666666666666666, 0.5, 0.6666666666666666)),
    ("lcs worked example",
     ["log", "error", "failed"], ["log", "failure"],
     0.48549177170732344, [0.3333333333333333, 0.0, 0.0, 0.0],
     (0.4, 0.0, 0.4)),
    ("empty hypothesis",
     [], ["a", "b"],
     0.0, [0.0, 0.0, 0.0, 0.0], (0.0, 0.0, 0.0)),
    ("disjoint",
     ["x", "y"], ["a", "b"],
     0.0, [0.0, 0.0, 0.0, 0.0], (0.0, 0.0, 0.0)),
    ("brevity penalty",
     ["a", "b"], ["a", "b", "c", "d"],
     0.36787944117144233, [1.0, 1.0, 0.0, 0.0],
     (0.6666666666666666, 0.5, 0.6666666666666666)),
    ("clipping",
     ["a", "a", "a", "b"], ["a", "b"],
     0.408248290463863, [0.5, 0.3333333333333333, 0.0, 0.0],
     (0.6666666666666666, 0.5, 0.6666666666666666)),
    ("mid overlap",
     ["failed", "to", "open", "file"], ["failed", "to", "close", "file"],
     0.4518010018049224, [0.75, 0.3333333333333333, 0.0, 0.0],
     (0.75, 0.3333333333333333, 0.75)),
    ("single token identical",
     ["x"], ["x"],
     1.0, [1.0, 1.0, 1.0, 1.0], (1.0, 1.0, 1.0)),
    ("single token different",
     ["x"], ["y"],
     0.0, [0.0, 0.0, 0.0, 0.0], (0.0, 0.0, 0.0)),
    ("hypothesis repeats reference token",
     ["a", "a"], ["a"],
     0.7071067811865476, [0.5, 0.0, 0.0, 0.0],
     (0.6666666666666666, 0.0, 0.6666666666666666)),
    ("statement pair",
     [LEVEL_PLACEHOLDER, "(", '"count",', "n", ")", ";"],
     [LEVEL_PLACEHOLDER, "(", '"total",', "n", ")", ";"],
     0.42044820762685725, [0.8333333333333334, 0.6, 0.25, 0.0],
     (0.8333333333333334, 0.6, 0.8333333333333334)),
    ("realistic message",
     ["log", ".", LEVEL_PLACEHOLDER, "(", '"failed to load {}"', ",", "path", ")", ";"],
     ["log", ".", LEVEL_PLACEHOLDER, "(", '"could not load {}"', ",", "path", ")", ";"],
     0.5969491792019646, [0.8888888888888888, 0.75, 0.5714285714285714, 0.3333333333333333],
     (0.8888888888888888, 0.75, 0.8888888888888888)),
]


class TestMetricOracles:
    @pytest.mark.parametrize(
        "name,hyp,ref,expected_bleu,expected_orders,expected_rouge",
        METRIC_FIXTURES,
        ids=[case[0] for case in METRIC_FIXTURES],
    )
    def test_frozen_fixture_values(self, name, hyp, ref, expected_bleu, expected_orders, expected_rouge):
        aggregate, orders = bleu(hyp, ref)
        assert aggregate / 100.0 == pytest.approx(expected_bleu, abs=1e-6)
        for got, want in zip(orders, expected_orders):
            assert got / 100.0 == pytest.approx(want, abs=1e-6)
        for got, want in zip(rouge(hyp, ref), expected_rouge):
            assert got / 100.0 == pytest.approx(want, abs=1e-6)

    @pytest.mark.parametrize(
        "name,hyp,ref,expected_bleu,expected_orders,expected_rouge",
        METRIC_FIXTURES,
        ids=[case[0] for case in METRIC_FIXTURES],
    )
    def test_oracle_agrees(self, name, hyp, ref, expected_bleu, expected_orders, expected_rouge):
        oracle_bleu, oracle_orders = bleu_oracle(hyp, ref)
        aggregate, orders = bleu(hyp, ref)
        assert aggregate / 100.0 == pytest.approx(oracle_bleu, abs=1e-6)
        for got, want in zip(orders, oracle_orders):
            assert got / 100.0 == pytest.approx(want, abs=1e-6)
        for got, want in zip(rouge(hyp, ref), rouge_oracle(hyp, ref)):
            assert got / 100.0 == pytest.approx(want, abs=1e-6)

    def test_empty_reference_rejected(self):
        with pytest.raises(EmptyReference):
            bleu(["a"], [])
        with pytest.raises(EmptyReference):
            rouge(["a"], [])

    @given(st.lists(st.sampled_from(["a", "b", "c", ";", "("]), min_size=1, max_size=12))
    @settings(max_examples=150)
    def test_identity_scores_100_everywhere(self, tokens):
        aggregate, orders = bleu(tokens, tokens)
        assert aggregate == pytest.approx(100.0)
        assert all(o == pytest.approx(100.0) for o in orders)
        assert all(r == pytest.approx(100.0) for r in rouge(tokens, tokens))

    @given(
        st.lists(st.sampled_from(["a", "b", "c", "d"]), max_size=10),
        st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=10),
    )
    @settings(max_examples=200)
    def test_scores_match_oracle_on_random_pairs(self, hyp, ref):
        aggregate, orders = bleu(hyp, ref)
        oracle_aggregate, oracle_orders = bleu_oracle(hyp, ref)
        assert aggregate / 100.0 == pytest.approx(oracle_aggregate, abs=1e-6)
        for got, want in zip(orders, oracle_orders):
            assert got / 100.0 == pytest.approx(want, abs=1e-6)
        for got, want in zip(rouge(hyp, ref), rouge_oracle(hyp, ref)):
            assert got / 100.0 == pytest.approx(want, abs=1e-6)


class TestLevels:
    def test_parse_error_call(self):
        assert parse_level('logger.error("x", e);') is Level.ERROR

    def test_parse_is_case_insensitive(self):
        assert parse_level("LOG.warn(msg);") is Level.WARN
        assert parse_level("LOG.WARN(msg);") is Level.WARN

    def test_unknown_when_no_level_call(self):
        assert parse_level("log.log(x);") is None
        assert parse_level("int error = 2;") is None

    def test_level_name_inside_string_is_ignored(self):
        assert parse_level('log.info("error happened");') is Level.INFO

    def test_rank_order(self):
        names = [level.name for level in sorted(Level, key=lambda l: l.value)]
        assert names == ["TRACE", "DEBUG", "INFO", "WARN", "ERROR", "FATAL"]

    def test_distance_examples(self):
        assert level_distance(Level.FATAL, Level.ERROR) == 1
        assert level_distance(Level.FATAL, Level.INFO) == 3
        assert level_distance(Level.INFO, Level.INFO) == 0

    @given(st.sampled_from(list(Level)), st.sampled_from(list(Level)))
    def test_distance_symmetry(self, a, b):
        assert level_distance(a, b) == level_distance(b, a)
        assert level_distance(a, b) >= 0
        assert (level_distance(a, b) == 0) == (a is b)


class TestMessageNormalization:
    def test_level_call_is_canonicalized(self):
        assert message_tokens('logger.error("x");') == [
            "logger", ".", LEVEL_PLACEHOLDER, "(", '"x"', ")", ";",
        ]

    def test_same_message_different_level_compares_equal(self):
        assert message_tokens('log.info("x");') == message_tokens('log.error("x");')

    def test_whitespace_is_irrelevant(self):
        assert message_tokens('log.info( "x" ,  e );') == message_tokens('log.info("x", e);')

    def test_statement_parses_into_dataclass(self):
        statement = LoggingStatement.from_text('log.warn("slow: {}", ms);')
        assert statement.level is Level.WARN
        assert statement.raw_text.endswith(";")
        assert LEVEL_PLACEHOLDER in statement.message_tokens


class TestAccuracies:
    def test_identical_predictions(self):
        pairs = [(3, 'log.info("a");'), (7, 'log.warn("b");')]
        assert accuracies(pairs, list(pairs)) == (100.0, 100.0, 100.0, 100.0)

    def test_wrong_anchor_judged_independently(self):
        predictions = [(5, 'log.info("a");')]
        targets = [(3, 'log.info("a");')]
        assert accuracies(predictions, targets) == (0.0, 100.0, 100.0, 0.0)

    def test_level_and_message_independent(self):
        predictions = [(3, 'log.error("a");')]
        targets = [(3, 'log.info("a");')]
        position, level, message, all3 = accuracies(predictions, targets)
        assert (position, level, message, all3) == (100.0, 0.0, 100.0, 0.0)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            accuracies([(0, "a;")], [])

    @given(
        st.lists(
            st.tuples(st.integers(0, 5), st.sampled_from(
                ['log.info("x");', 'log.warn("y");', 'log.info("z");']
            )),
            min_size=1,
            max_size=20,
        ),
        st.data(),
    )
    @settings(max_examples=50)
    def test_all3_never_exceeds_component_accuracies(self, targets, data):
        predictions = [
            (data.draw(st.integers(0, 5)), data.draw(st.sampled_from(
                ['log.info("x");', 'log.warn("y");', 'log.error("w");']
            )))
            for _ in targets
        ]
        position, level, message, all3 = accuracies(predictions, targets)
        assert all3 <= min(position, level, message)


class TestBuckets:
    def test_level_buckets(self):
        assert [level_bucket(d) for d in (0, 1, 2, 3, None)] == ["0", "1", "2", ">2", ">2"]
        assert LEVEL_BUCKETS == ("0", "1", "2", ">2")

    def test_position_buckets(self):
        assert position_bucket(0) == "<=10"
        assert position_bucket(10) == "<=10"
        assert position_bucket(11) == "11-20"
        assert position_bucket(100) == "91-100"
        assert position_bucket(101) == ">100"
        assert POSITION_BUCKETS[0] == "<=10" and POSITION_BUCKETS[-1] == ">100"

    def test_position_distance(self):
        assert position_distance(120, 100) == 20
        assert position_distance(7, 7) == 0
