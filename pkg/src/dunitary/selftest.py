"""Relation self-test: soundness sweep, residue rings, derived-rule replays."""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, replace
from typing import Callable, TextIO

from .linalg import Generator
from .ring import RESIDUE_REPS, CycInt, residue
from .rules import RULES, Derivation, RuleSchema, derived_proof, expand_steps, instances, instantiate
from .words import evaluate, to_basic


@dataclass
class GroupResult:
    name: str
    ok: bool
    checked: int
    detail: str = ""


def corrupt(rules: dict[int, RuleSchema], rid: int) -> dict[int, RuleSchema]:
    """Copy of ``rules`` with an extra w on the first index of rule rid's rhs."""
    out = dict(rules)
    r = out[rid]
    var = r.vars[0] if r.vars else 1
    out[rid] = replace(r, rhs=r.rhs + (("W", (var,)),))
    return out


def soundness(rules: dict[int, RuleSchema], n: int, ids=None) -> GroupResult:
    checked = 0
    for rid in sorted(ids or rules):
        r = rules[rid]
        for s in instances(r, n):
            checked += 1
            if evaluate(instantiate(r.lhs, s), n) != evaluate(instantiate(r.rhs, s), n):
                subst = ",".join(f"{k}={v}" for k, v in s.items()) or "ground"
                return GroupResult(f"soundness n={n}", False, checked,
                                   f"eq. ({rid}) fails at {subst}: {r.describe()}")
    return GroupResult(f"soundness n={n}", True, checked)


def residue_rings() -> GroupResult:
    box = range(-2, 3)
    checked = 0
    for p, size in ((1, 2), (2, 4), (3, 8)):
        seen = set()
        for coeffs in itertools.product(box, repeat=4):
            seen.add(tuple(residue(CycInt(*coeffs), p).rep))
            checked += 1
        expected = {tuple(x) for x in RESIDUE_REPS[p]}
        if len(seen) != size or seen != expected:
            return GroupResult("residue rings", False, checked,
                               f"Z[omega]/(delta^{p}) has {len(seen)} classes, expected {size}")
    return GroupResult("residue rings", True, checked)


def derived_replays(n: int = 4) -> GroupResult:
    checked = 0
    for rid in range(21, 33):
        r = RULES[rid]
        for s in instances(r, n):
            checked += 1
            d = Derivation(instantiate(r.lhs, s), instantiate(r.rhs, s),
                           list(expand_steps(derived_proof(rid, tuple(sorted(s.items()))))))
            try:
                d.replay(n=n, table1_only=True)
            except Exception as exc:  # report, don't crash
                return GroupResult("derived replays", False, checked, f"eq. ({rid}): {exc}")
    return GroupResult("derived replays", True, checked)


def basic_decomposition(n: int) -> GroupResult:
    checked = 0
    gens = [Generator("W", i) for i in range(1, n + 1)]
    gens += [Generator(k, i, j) for k in "XH" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for g in gens:
        checked += 1
        if evaluate(to_basic(g), n) != evaluate((g,), n):
            return GroupResult(f"basic decomposition n={n}", False, checked, f"{g}")
    return GroupResult(f"basic decomposition n={n}", True, checked)


def run_selftest(n4_only: bool = False, corrupt_rule: int | None = None,
                 out: TextIO = sys.stdout) -> bool:
    rules = RULES if corrupt_rule is None else corrupt(RULES, corrupt_rule)
    generic = [rid for rid in rules if rid not in (31, 32)]
    groups: list[Callable[[], GroupResult]] = [
        lambda: soundness(rules, 4),
        residue_rings,
        lambda: derived_replays(4),
        lambda: basic_decomposition(4),
    ]
    if not n4_only:
        groups += [
            lambda: soundness(rules, 5, generic),
            lambda: soundness(rules, 6, generic),
            lambda: basic_decomposition(6),
        ]
    ok = True
    for run in groups:
        res = run()
        status = "PASS" if res.ok else "FAIL"
        line = f"{status} {res.name} ({res.checked} checks)"
        if res.detail:
            line += f": {res.detail}"
        print(line, file=out)
        ok &= res.ok
    return ok
