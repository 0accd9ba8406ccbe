from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from dunitary.linalg import H, W, X, clifford_t_gates, generator_matrix, identity
from dunitary.ring import CycInt, RingElem
from dunitary.synth import (
    SylHW,
    SylWX,
    SynthError,
    column_step,
    flatten,
    next_syllable,
    sync_pair,
    synthesize,
    synthesize_with_levels,
    unit_vector_form,
)
from dunitary.words import evaluate, evaluate_on

from conftest import random_word


def test_examples():
    assert synthesize(identity(4)) == []
    assert synthesize(clifford_t_gates()["CNOT"]) == [SylWX(0, 3, 4)]
    assert flatten([SylWX(0, 3, 4)]) == (X(3, 4),)
    assert synthesize(generator_matrix(X(1, 2), 4)) == [SylWX(0, 1, 2)]
    syls = synthesize(generator_matrix(H(1, 2), 2))
    assert len(syls) == 1 and isinstance(syls[0], SylHW)


def test_sync_pair():
    one = CycInt.of(1)
    assert sync_pair(one, one) == 0
    assert sync_pair(one, CycInt.omega(1)) == 1
    assert sync_pair(CycInt.omega(3), one) == 1  # (0 - 3) mod 4
    with pytest.raises(SynthError):
        sync_pair(CycInt(0, 0, 1, 1), one)


def test_sync_pair_makes_pair_divisible():
    for e1 in range(8):
        for e2 in range(8):
            u1, u2 = CycInt.omega(e1), CycInt.omega(e2)
            z = sync_pair(u1, u2)
            v = (RingElem.from_cycint(u1), RingElem.from_cycint(u2))
            out = evaluate_on((H(1, 2),) + (W(1),) * z, type(identity(2))(((v[0], RingElem.ZERO), (v[1], RingElem.ZERO))))
            # both entries lost their odd part: lde drops below 0 -> integer multiple of delta
            assert all(row[0].k == 0 for row in out.rows)


def test_unit_vector_form():
    v = (RingElem.ZERO, RingElem.from_cycint(CycInt.omega(3)), RingElem.ZERO)
    assert unit_vector_form(v) == (2, 3)
    assert unit_vector_form((RingElem.ONE,)) == (1, 8)
    with pytest.raises(SynthError):
        unit_vector_form((RingElem.ONE, RingElem.ONE))


def test_column_step_pairs_odd_entries():
    M = evaluate((H(1, 2), H(3, 4), W(1), H(1, 3)), 4)
    syls = column_step(M.column(3))
    assert all(isinstance(s, SylHW) for s in syls)
    assert len(syls) in (1, 2)


def test_next_syllable_identity_error():
    with pytest.raises(SynthError):
        next_syllable(identity(3))


def test_non_unitary_rejected():
    M = identity(2)
    bad = type(M)(((RingElem.from_int(2), RingElem.ZERO), (RingElem.ZERO, RingElem.ONE)))
    with pytest.raises(SynthError):
        synthesize(bad)


@given(st.integers(0, 10**6), st.integers(1, 40), st.sampled_from([2, 3, 4, 5]))
def test_roundtrip_and_levels(seed, length, n):
    w = random_word(random.Random(seed), length, n)
    M = evaluate(w, n)
    steps = synthesize_with_levels(M)
    for syl, before, after in steps:
        assert after < before
    syls = [s for s, _, _ in steps]
    assert evaluate_on(flatten(syls), M) == identity(n)
    # the normal word of M^-1 evaluates to M
    assert evaluate(flatten(synthesize(M.adjoint())), n) == M
