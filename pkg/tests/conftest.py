from __future__ import annotations

import random

import pytest
from hypothesis import settings

from dunitary.cli import all_generators
from dunitary.linalg import Generator
from dunitary.rules import RULES, match_rule, make_instance, apply_rule
from dunitary.words import inverse_gen

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")

BASIC4 = (Generator("X", 1, 2), Generator("X", 2, 3), Generator("X", 3, 4),
          Generator("H", 1, 2), Generator("W", 1))


def random_word(rng: random.Random, length: int, n: int = 4) -> tuple:
    gens = all_generators(n)
    return tuple(rng.choice(gens) for _ in range(length))


def scramble(rng: random.Random, w: tuple, inserts: int = 3, rewrites: int = 3) -> tuple:
    """A word with the same value: inverse pairs inserted, rules applied."""
    w = tuple(w)
    gens = all_generators(4)
    for _ in range(inserts):
        g = rng.choice(gens)
        pos = rng.randrange(len(w) + 1)
        w = w[:pos] + (g,) + tuple(inverse_gen(g)) + w[pos:]
    for _ in range(rewrites):
        options = []
        for pos in range(len(w)):
            for rid, rule in RULES.items():
                for d in ("LR", "RL"):
                    if not rule.side(d):
                        continue
                    s = match_rule(rule, d, w, pos)
                    if s is not None and max(s.values(), default=4) <= 4:
                        options.append(make_instance(rid, d, pos, s))
        if options:
            w = apply_rule(w, rng.choice(options), 4)
    return w


@pytest.fixture
def rng():
    return random.Random(20240601)
