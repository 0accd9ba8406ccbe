from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from dunitary.linalg import H, W, X, identity, level
from dunitary.words import (
    EPSILON,
    WordError,
    evaluate,
    extent,
    format_word,
    inverse,
    parse_word,
    to_basic,
    is_basic,
    word_to_basic,
)
from dunitary import words

from conftest import random_word


def test_parse_examples():
    assert parse_word("H[1,2] w[3]") == (H(1, 2), W(3))
    assert parse_word("w^3[1]") == (W(1),) * 3
    assert parse_word("") == EPSILON
    assert parse_word("eps") == EPSILON
    with pytest.raises(WordError):
        parse_word("X[2,1]")
    with pytest.raises(WordError):
        parse_word("H[1,2")
    with pytest.raises(WordError):
        parse_word("H[1,2]X[1,2]")
    with pytest.raises(WordError):
        parse_word("H[1,5]", 4)
    with pytest.raises(WordError):
        parse_word("w[1,2]")


def test_format_compresses_phases():
    assert format_word((W(1),) * 3 + (X(1, 2),)) == "w^3[1] X[1,2]"
    assert format_word(EPSILON) == ""


def test_evaluate_examples():
    assert evaluate(EPSILON, 4) == identity(4)
    assert evaluate(parse_word("X[1,2] X[2,3]"), 4) == evaluate(parse_word("X[2,3] X[1,3]"), 4)
    assert evaluate(parse_word("H[1,2] H[1,2]"), 4) == identity(4)
    with pytest.raises(WordError):
        evaluate((X(1, 5),), 4)


def test_extent_examples():
    assert extent(X(1, 3)) == 3
    assert extent(parse_word("H[1,2] w[4]")) == 4
    assert extent(EPSILON) == 0


def test_to_basic_examples():
    assert to_basic(H(1, 2)) == (H(1, 2),)
    assert format_word(to_basic(X(1, 3))) == "X[2,3] X[1,2] X[2,3]"
    assert format_word(to_basic(W(2))) == "X[1,2] w[1] X[1,2]"


def test_rule_names_reexported():
    assert len(words.rule_table(4)) == 20
    assert len(words.derived_rules(4)) == 12
    assert words.apply_rule is not None


ALL6 = [W(i) for i in range(1, 7)] + [g(i, j) for g in (X, H) for i in range(1, 7) for j in range(i + 1, 7)]


@pytest.mark.parametrize("g", ALL6, ids=str)
def test_to_basic_sound(g):
    b = to_basic(g)
    assert all(is_basic(x) for x in b)
    assert extent(b) == extent(g)
    n = max(extent(g), 2)
    assert evaluate(b, n) == evaluate((g,), n)


@pytest.mark.parametrize("g", [x for x in ALL6 if extent(x) <= 4], ids=str)
def test_to_basic_preserves_level(g):
    rng = random.Random(str(g))
    for _ in range(1000):
        s = evaluate(random_word(rng, rng.randint(0, 12)), 4)
        t = evaluate((g,), 4) @ s
        bound = max(level(s), level(t))
        st_ = s
        for b in reversed(to_basic(g)):
            st_ = evaluate((b,), 4) @ st_
            assert level(st_) <= bound


@given(st.integers(0, 10**6), st.integers(0, 30))
def test_parse_format_roundtrip(seed, length):
    w = random_word(random.Random(seed), length)
    assert parse_word(format_word(w)) == w
    assert format_word(parse_word(format_word(w))) == format_word(w)


@given(st.integers(0, 10**6), st.integers(0, 20))
def test_inverse(seed, length):
    w = random_word(random.Random(seed), length)
    assert evaluate(inverse(w) + w, 4) == identity(4)
    assert evaluate(word_to_basic(w), 4) == evaluate(w, 4)
