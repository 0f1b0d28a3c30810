import pytest
from hypothesis import given, strategies as st

from mosim import parse_sentence, parse_text, tokenize
from mosim.errors import (
    GrammarError,
    IllegalCharacterError,
    MosimError,
    PrepositionMismatchError,
    UnknownWordError,
)
from mosim.lexicon import builtin_lexicon

LEX = builtin_lexicon()

VOCAB = ["the", "a", "ball", "wall", "bird", "block", "rolled", "slid", "bounced",
         "flew", "moved", "arrived", "left", "to", "from", "towards", "at", "zorp"]


def test_tokenize_running_example():
    assert tokenize("The ball rolled to the wall.") == \
        ["the", "ball", "rolled", "to", "the", "wall"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_rejects_comma_with_offset():
    with pytest.raises(IllegalCharacterError) as exc:
        tokenize("ball, rolled")
    assert exc.value.byte_offset == 4


def test_tokenize_only_trailing_period():
    with pytest.raises(IllegalCharacterError):
        tokenize("the ball. rolled")


def test_parse_running_example():
    frame = parse_sentence(["the", "ball", "rolled", "to", "the", "wall"], LEX)
    assert frame.verb.lemma == "roll"
    assert frame.theme == "ball"
    assert frame.path is not None
    assert (frame.path.prep, frame.path.ground) == ("to", "wall")


def test_parse_bare_sentence():
    frame = parse_sentence(["the", "ball", "slid"], LEX)
    assert frame.verb.lemma == "slide"
    assert frame.theme == "ball"
    assert frame.path is None


def test_parse_missing_preposition():
    with pytest.raises(GrammarError):
        parse_sentence(["the", "ball", "rolled", "the", "wall"], LEX)


def test_parse_unknown_word():
    with pytest.raises(UnknownWordError):
        parse_sentence(["the", "zorp", "rolled"], LEX)


def test_parse_swapped_det_and_noun():
    with pytest.raises(GrammarError):
        parse_sentence(["ball", "the", "rolled"], LEX)


def test_preposition_mismatch():
    with pytest.raises(PrepositionMismatchError):
        parse_sentence(["the", "ball", "arrived", "to", "the", "wall"], LEX)
    with pytest.raises(PrepositionMismatchError):
        parse_sentence(["the", "ball", "rolled", "at", "the", "wall"], LEX)


def test_arrive_at_and_leave_from_parse():
    frame = parse_text("the ball arrived at the wall", LEX)
    assert (frame.verb.lemma, frame.path.prep) == ("arrive", "at")
    frame = parse_text("the ball left", LEX)
    assert frame.verb.lemma == "leave" and frame.path is None
    frame = parse_text("the ball left from the wall", LEX)
    assert (frame.verb.lemma, frame.path.prep) == ("leave", "from")


def test_parse_is_deterministic():
    tokens = ["the", "bird", "flew", "to", "the", "wall"]
    assert parse_sentence(tokens, LEX) == parse_sentence(tokens, LEX)


@given(st.lists(st.sampled_from(VOCAB), max_size=8))
def test_fuzz_no_invalid_frame_escapes(tokens):
    try:
        frame = parse_sentence(tokens, LEX)
    except MosimError:
        return
    # every escaping frame satisfies the frame invariants
    LEX.lookup_noun(frame.theme)
    if frame.path is not None:
        assert frame.path.prep in frame.verb.allowed_preps
        LEX.lookup_noun(frame.path.ground)


@given(st.text(max_size=30))
def test_fuzz_tokenize_total(text):
    try:
        tokens = tokenize(text)
    except IllegalCharacterError:
        return
    assert all(t == t.casefold() and t.isalpha() for t in tokens)
