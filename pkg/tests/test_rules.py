from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dunitary.linalg import H, W, X
from dunitary.rules import (
    RULES,
    ConstraintViolated,
    Derivation,
    NoMatch,
    RuleError,
    apply_rule,
    derived_proof,
    derived_rules,
    expand_steps,
    format_step,
    instances,
    instantiate,
    make_instance,
    match_rule,
    parse_derivation,
    parse_step,
    rule_table,
    to_basic_proof,
    word_to_basic_proof,
)
from dunitary.words import evaluate, parse_word, to_basic, word_to_basic

from conftest import random_word
from test_linalg import numeric_generator


def numeric(word, n):
    M = np.eye(n, dtype=complex)
    for g in reversed(word):
        M = numeric_generator(g, n) @ M
    return M


def test_table_sizes():
    assert [r.id for r in rule_table(4)] == list(range(1, 21))
    assert [r.id for r in derived_rules(4)] == list(range(21, 33))
    # 31 and 32 are ground statements on four indices
    assert [r.id for r in derived_rules(3)] == list(range(21, 31))


@pytest.mark.parametrize("n", [4, 5])
def test_soundness_sweep(n):
    checked = 0
    for r in RULES.values():
        for s in instances(r, n):
            lhs, rhs = instantiate(r.lhs, s), instantiate(r.rhs, s)
            assert evaluate(lhs, n) == evaluate(rhs, n), (r.id, s)
            checked += 1
    assert checked > 100


@pytest.mark.slow
def test_soundness_sweep_n6():
    for r in RULES.values():
        if r.id in (31, 32):
            continue
        for s in instances(r, 6):
            assert evaluate(instantiate(r.lhs, s), 6) == evaluate(instantiate(r.rhs, s), 6)


def test_soundness_by_float_oracle():
    # independent of the exact ring: compare numerically with plain numpy matrices
    for r in RULES.values():
        for s in instances(r, 4):
            assert np.allclose(numeric(instantiate(r.lhs, s), 4), numeric(instantiate(r.rhs, s), 4))


def test_instance_examples():
    assert {"j": 2} in list(instances(RULES[1], 4))
    assert list(instances(RULES[31], 4)) == [{}]
    assert list(instances(RULES[20], 3)) == []
    assert all(s["j"] < s["k"] for s in instances(RULES[10], 4))


def test_apply_rule_examples():
    w = parse_word("H[1,2] H[1,2] X[3,4]")
    assert apply_rule(w, make_instance(2, "LR", 0, {"j": 1, "k": 2})) == (X(3, 4),)
    w = parse_word("w[1] w[2]")
    assert apply_rule(w, make_instance(4, "LR", 0, {"j": 1, "k": 2})) == (W(2), W(1))
    with pytest.raises(ConstraintViolated):
        apply_rule(parse_word("X[1,2] w[2]"), make_instance(10, "LR", 0, {"j": 2, "k": 1}))
    with pytest.raises(NoMatch):
        apply_rule(parse_word("X[1,2] w[1]"), make_instance(10, "LR", 0, {"j": 1, "k": 2}))
    with pytest.raises(RuleError):
        apply_rule((), make_instance(99, "LR", 0, {}))
    with pytest.raises(RuleError):
        apply_rule((), make_instance(3, "UP", 0, {"j": 1, "k": 2}))
    with pytest.raises(ConstraintViolated):
        apply_rule(parse_word("X[1,5] X[1,5]"), make_instance(3, "LR", 0, {"j": 1, "k": 5}), n=4)


def test_apply_rule_insertion():
    # RL on a rule whose rhs is empty inserts the lhs
    out = apply_rule(parse_word("w[1]"), make_instance(3, "RL", 1, {"j": 2, "k": 3}))
    assert out == (W(1), X(2, 3), X(2, 3))


def test_match_rule():
    w = parse_word("w[3] X[2,4] w[4]")
    assert match_rule(RULES[10], "LR", w, 1) == {"j": 2, "k": 4}
    assert match_rule(RULES[10], "LR", w, 0) is None
    assert match_rule(RULES[10], "LR", w, 2) is None


def test_step_format_roundtrip():
    st_ = make_instance(12, "RL", 7, {"j": 1, "k": 2, "l": 3})
    assert format_step(st_) == "12 RL 7 j=1,k=2,l=3"
    assert parse_step(format_step(st_)) == st_
    assert parse_step("31 LR 0 -") == make_instance(31, "LR", 0, {})
    text = "# start\n2 LR 0 j=1,k=2\n\n3 RL 1 j=3,k=4  # note\n"
    assert len(parse_derivation(text)) == 2
    with pytest.raises(RuleError):
        parse_step("2 LR")


@pytest.mark.parametrize("rid", range(21, 33))
def test_derived_replays(rid):
    r = RULES[rid]
    for s in instances(r, 5 if rid < 31 else 4):
        key = tuple(sorted(s.items()))
        d = Derivation(instantiate(r.lhs, s), instantiate(r.rhs, s), list(derived_proof(rid, key)))
        d.replay(check_semantics=True, dim=5 if rid < 31 else 4)
        stats = d.expanded().replay(table1_only=True)
        assert stats["steps"] >= 1
        assert all(k <= 20 for k in stats["rules"])


def test_rule_23_reduces_to_18():
    # conjugating 18 by H[j,k] pairs
    proof = derived_proof(23, (("j", 1), ("k", 2)))
    assert {st_.rule for st_ in proof} == {2, 18}


def test_expand_steps_inlines_derived():
    inst = make_instance(23, "LR", 1, {"j": 1, "k": 3})
    w = (W(2),) + instantiate(RULES[23].lhs, {"j": 1, "k": 3})
    out = list(expand_steps([inst]))
    assert all(st_.rule <= 20 for st_ in out)
    assert Derivation(w, apply_rule(w, inst), out).replay()["steps"] == len(out)


def test_derivation_inverse():
    w = parse_word("H[1,2] X[1,2] w[3]")
    steps = [make_instance(18, "LR", 0, {"j": 1, "k": 2})]
    d = Derivation(w, apply_rule(w, steps[0]), steps)
    d.replay()
    d.inverse().replay()
    bad = Derivation(w, w, steps)
    with pytest.raises(RuleError):
        bad.replay()
    with pytest.raises(RuleError):
        Derivation(w, w, [make_instance(23, "LR", 5, {"j": 1, "k": 2})]).replay(table1_only=True)


ALL5 = [W(i) for i in range(1, 6)] + [g(i, j) for g in (X, H) for i in range(1, 6) for j in range(i + 1, 6)]


@pytest.mark.parametrize("g", ALL5, ids=str)
def test_to_basic_proof(g):
    Derivation((g,), to_basic(g), list(to_basic_proof(g))).replay(check_semantics=True, dim=5)


@given(st.integers(0, 10**6), st.integers(0, 20))
def test_apply_rule_preserves_evaluation(seed, length):
    rng = random.Random(seed)
    w = random_word(rng, length)
    M = evaluate(w, 4)
    # random applicable rule instances, in either direction
    for _ in range(5):
        rid = rng.randrange(1, 33)
        r = RULES[rid]
        direction = rng.choice(["LR", "RL"])
        for pos in rng.sample(range(len(w) + 1), len(w) + 1):
            s = match_rule(r, direction, w, pos) if r.side(direction) else None
            if s is not None:
                w = apply_rule(w, make_instance(rid, direction, pos, s))
                break
    assert evaluate(w, 4) == M


@given(st.integers(0, 10**6), st.integers(0, 15))
def test_word_to_basic_proof(seed, length):
    w = random_word(random.Random(seed), length)
    Derivation(w, word_to_basic(w), word_to_basic_proof(w)).replay()
