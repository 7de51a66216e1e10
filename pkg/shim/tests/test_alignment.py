from loggen_shim.alignment import align_tokens
from loggen_shim.tinymodel import build_tokenizer


def test_ranges_are_ordered_and_cover_all_subtokens():
    tokenizer = build_tokenizer()
    texts = ["log", ".", "info", "(", "getCount", ")", ";"]
    alignment = align_tokens(tokenizer, texts)
    assert len(alignment.ranges) == len(texts)
    cursor = 0
    for start, end in alignment.ranges:
        assert start == cursor
        assert end >= start
        cursor = end
    assert cursor == len(alignment.subtoken_ids)


def test_multi_character_token_splits_into_subtokens():
    tokenizer = build_tokenizer()
    alignment = align_tokens(tokenizer, ["getCount"])
    start, end = alignment.ranges[0]
    assert end - start == len("getCount")  # one char-level subtoken per character
    assert alignment.first_subtoken(0) == start


def test_single_character_tokens_map_one_to_one():
    tokenizer = build_tokenizer()
    alignment = align_tokens(tokenizer, [";", "{", "}"])
    assert alignment.ranges == ((0, 1), (1, 2), (2, 3))


def test_concatenation_matches_joint_encoding_per_token():
    tokenizer = build_tokenizer()
    texts = ["int", "x", "=", "0", ";"]
    alignment = align_tokens(tokenizer, texts)
    for text, (start, end) in zip(texts, alignment.ranges):
        assert list(alignment.subtoken_ids[start:end]) == tokenizer.encode(
            text, add_special_tokens=False
        )
