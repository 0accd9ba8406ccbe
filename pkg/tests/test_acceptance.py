"""Acceptance criteria 1-7.  Each test prints one PASS/FAIL line."""

from __future__ import annotations

import itertools
import random
import time
from contextlib import contextmanager

import numpy as np

from dunitary.linalg import H, W, apply_generator, clifford_t_gates, generator_matrix, identity, X
from dunitary.rewrite import Engine, forbidden_residue_check, normal_form, normalize
from dunitary.ring import RESIDUE_REPS, CycInt, check_add_conj, lde, residue
from dunitary.rules import RULES, instances, instantiate
from dunitary.synth import flatten, synthesize, synthesize_with_levels
from dunitary.words import evaluate, evaluate_on

from conftest import random_word, scramble
from test_ring import oracle_delta_divides

SEED = 20240601


@contextmanager
def criterion(capsys, number: int, title: str):
    """Print one line per criterion whatever the outcome."""
    info: dict = {}
    t0 = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        dt = time.perf_counter() - t0
        extra = "; ".join(f"{k}={v}" for k, v in info.items())
        with capsys.disabled():
            print(f"\ncriterion {number} {'PASS' if ok else 'FAIL'}: {title} [{dt:.2f}s] {extra}")


def test_criterion_1_soundness(capsys):
    with criterion(capsys, 1, "rules 1-32 exact at n=4") as info:
        t0 = time.perf_counter()
        count = 0
        for r in RULES.values():
            for s in instances(r, 4):
                assert evaluate(instantiate(r.lhs, s), 4) == evaluate(instantiate(r.rhs, s), 4), (r.id, s)
                count += 1
        info["instances"] = count
        assert sorted(RULES) == list(range(1, 33))
        assert time.perf_counter() - t0 < 5


def test_criterion_2_synthesis_roundtrip(capsys):
    with criterion(capsys, 2, "1000 words, lengths 1-128, round trip") as info:
        rng = random.Random(SEED)
        t0 = time.perf_counter()
        syllables = 0
        for _ in range(1000):
            w = random_word(rng, rng.randint(1, 128))
            M = evaluate(w, 4)
            steps = synthesize_with_levels(M)
            assert all(after < before for _, before, after in steps)
            assert evaluate_on(flatten([s for s, _, _ in steps]), M) == identity(4)
            syllables += len(steps)
        info["syllables"] = syllables
        assert time.perf_counter() - t0 < 60


def _pairs(count: int):
    rng = random.Random(SEED + 3)
    out = []
    while len(out) < count:
        w = random_word(rng, rng.randint(1, 6))
        v = scramble(rng, w, inserts=2, rewrites=3)
        out.append((w, v))
    return out


def test_criterion_3_canonicity(capsys):
    with criterion(capsys, 3, "200 co-evaluating pairs, certified") as info:
        pairs = _pairs(200)
        t0 = time.perf_counter()
        for w, v in pairs:
            assert evaluate(w, 4) == evaluate(v, 4)
            assert normal_form(w) == normal_form(v)
        info["no_cert_s"] = round(time.perf_counter() - t0, 2)
        assert time.perf_counter() - t0 < 60

        t0 = time.perf_counter()
        steps = 0
        for w, v in pairs:
            eng = Engine()
            nf1, d1 = normalize(w, engine=eng)
            nf2, d2 = normalize(v, engine=eng)
            assert nf1 == nf2
            for d in (d1, d2):
                stats = d.replay(table1_only=True, check_instances=True)
                assert set(stats["rules"]) <= set(range(1, 21))
                steps += stats["steps"]
        info["cert_s"] = round(time.perf_counter() - t0, 1)
        info["steps"] = steps
        assert time.perf_counter() - t0 < 600


def test_criterion_4_residues(capsys):
    with criterion(capsys, 4, "residue rings have 2, 4, 8 classes") as info:
        box = [CycInt(*c) for c in itertools.product(range(-2, 3), repeat=4)]
        for p, size in ((1, 2), (2, 4), (3, 8)):
            reps = {residue(x, p).rep for x in box}
            assert reps == set(RESIDUE_REPS[p]) and len(reps) == size
            # representatives are pairwise incongruent under the independent oracle
            for a, b in itertools.combinations(RESIDUE_REPS[p], 2):
                assert not oracle_delta_divides(tuple(x - y for x, y in zip(a, b)), p)
            info[f"p{p}"] = len(reps)


def test_criterion_5_guards(capsys):
    with criterion(capsys, 5, "sqrt2 | x + x^dagger, forbidden residues") as info:
        t0 = time.perf_counter()
        rng = random.Random(SEED + 5)
        for _ in range(10_000):
            x = CycInt(*(rng.randint(-10**6, 10**6) for _ in range(4)))
            assert check_add_conj(x)
        columns = 0
        M = identity(4)
        while columns < 10_000:
            # a long walk; every state contributes its four columns
            M = evaluate(random_word(rng, rng.randint(1, 4)), 4) @ M
            for j in range(4):
                v = [row[j] for row in M.rows]
                assert forbidden_residue_check(v)
                assert lde(v) != 1
                columns += 1
            if rng.random() < 0.05:
                M = identity(4)
        info["columns"] = columns
        assert time.perf_counter() - t0 < 30


def _lde_families(kmax: int, per_k: int, rng: random.Random) -> dict[int, list]:
    fams: dict[int, list] = {k: [] for k in range(1, kmax + 1)}
    pairs = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    while any(len(v) < per_k for k, v in fams.items() if k != 1):
        M = identity(4)
        for _ in range(200):
            M = apply_generator(H(*rng.choice(pairs)), M)
            for _ in range(rng.randint(0, 3)):
                M = apply_generator(W(rng.randint(1, 4)), M)
            k = lde(M)
            if k > kmax:
                break
            if k in fams and len(fams[k]) < per_k:
                fams[k].append(M)
    return fams


def test_criterion_6_complexity(capsys):
    with criterion(capsys, 6, "generator count linear in lde") as info:
        t0 = time.perf_counter()
        fams = _lde_families(40, 16, random.Random(SEED + 6))
        ks, means, samples = [], [], []
        for k, mats in fams.items():
            if not mats:
                continue  # lde 1 never occurs for a unitary
            counts = [len(flatten(synthesize(M))) for M in mats]
            ks.append(k)
            means.append(float(np.mean(counts)))
            samples += [(k, c) for c in counts]
        # least-squares line through the family means
        x, y = np.array(ks, float), np.array(means)
        C, C0 = np.polyfit(x, y, 1)
        r2 = 1 - np.sum((y - (C * x + C0)) ** 2) / np.sum((y - y.mean()) ** 2)
        # envelope: same slope, intercept raised until every sample lies below
        C0_env = max(c - C * k for k, c in samples)
        info.update(C=round(C, 3), C0=round(C0_env, 2), R2=round(r2, 4),
                    empty=[k for k, v in fams.items() if not v])
        assert C > 0 and r2 >= 0.9
        assert all(c <= C * k + C0_env + 1e-9 for k, c in samples)
        assert time.perf_counter() - t0 < 120


def test_criterion_7_gates(capsys):
    with criterion(capsys, 7, "CNOT = X[3,4], T^2 = S, w^8 = 1") as info:
        g = clifford_t_gates()
        assert flatten(synthesize(g["CNOT"].adjoint())) == (X(3, 4),)
        assert g["CNOT"] == generator_matrix(X(3, 4), 4)
        assert g["T1"] @ g["T1"] == g["S1"] and g["T2"] @ g["T2"] == g["S2"]
        P = identity(4)
        for _ in range(8):
            P = P @ g["OMEGA"]
        assert P == identity(4)
        info["gates"] = len(g)
