"""Relation tables as schemas, rule application, and derivations.

Rules 1-20 are the defining relations; rules 21-32 are derived and each
carries a derivation over lower-numbered rules, built with the small tactic
layer in ``Proof``.  Expanding a derivation replaces every derived step by
its stored proof until only rules 1-20 remain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .linalg import Generator
from .words import Word, evaluate, format_word, is_basic, to_basic

__all__ = [
    "RuleSchema",
    "RuleInstance",
    "RuleError",
    "NoMatch",
    "ConstraintViolated",
    "RULES",
    "rule_table",
    "derived_rules",
    "instances",
    "apply_rule",
    "match_rule",
    "Derivation",
    "Proof",
    "expand_steps",
    "invert_steps",
    "derived_proof",
    "parse_derivation",
    "format_step",
]


class RuleError(ValueError):
    pass


class NoMatch(RuleError):
    pass


class ConstraintViolated(RuleError):
    pass


# A template atom is (kind, index-expressions); an index expression is a
# variable name or a literal int.
Atom = tuple


def _atoms(spec: str) -> tuple[Atom, ...]:
    """Tiny template language: ``H(j,k) W(j)^2 X(j,l)``."""
    out: list[Atom] = []
    for tok in spec.split():
        power = 1
        if "^" in tok:
            tok, p = tok.split("^")
            power = int(p)
        kind = tok[0]
        args = tuple(int(a) if a.isdigit() else a for a in tok[2:-1].split(","))
        out.extend([(kind, args)] * power)
    return tuple(out)


def _lt(*names):
    def check(s):
        vals = [s[v] for v in names]
        return all(a < b for a, b in zip(vals, vals[1:]))

    return check


def _disjoint(s):
    return s["j"] < s["k"] and s["l"] < s["t"] and not ({s["j"], s["k"]} & {s["l"], s["t"]})


@dataclass(frozen=True)
class RuleSchema:
    id: int
    vars: tuple[str, ...]
    lhs: tuple[Atom, ...]
    rhs: tuple[Atom, ...]
    constraint: Callable[[dict], bool]
    condition: str = ""
    min_dim: int = 1

    @property
    def table(self) -> int:
        return 1 if self.id <= 20 else 2

    def admits(self, subst: dict) -> bool:
        return self.constraint(subst)

    def side(self, direction: str) -> tuple[Atom, ...]:
        return self.lhs if direction == "LR" else self.rhs

    def other(self, direction: str) -> tuple[Atom, ...]:
        return self.rhs if direction == "LR" else self.lhs

    def describe(self) -> str:
        def show(side):
            parts = []
            for atom, run in itertools.groupby(side):
                kind, args = atom
                m = len(list(run))
                idx = ",".join(str(a) for a in args)
                if kind == "W":
                    parts.append(f"w[{idx}]" if m == 1 else f"w^{m}[{idx}]")
                else:
                    parts.extend([f"{kind}[{idx}]"] * m)
            return " ".join(parts) or "eps"

        cond = f"  ({self.condition})" if self.condition else ""
        return f"({self.id}) {show(self.lhs)} = {show(self.rhs)}{cond}"


def _r(id_, vars_, lhs, rhs, constraint=None, condition="", min_dim=1):
    return RuleSchema(
        id_, tuple(vars_), _atoms(lhs), _atoms(rhs),
        constraint or (lambda s: True), condition, min_dim,
    )


def _neq(s):
    return s["j"] != s["k"]


def _lnot(s):
    return s["j"] < s["k"] and s["l"] not in (s["j"], s["k"])


_TABLE = [
    _r(1, "j", "W(j)^8", ""),
    _r(2, "jk", "H(j,k)^2", "", _lt("j", "k"), "j<k"),
    _r(3, "jk", "X(j,k)^2", "", _lt("j", "k"), "j<k"),
    _r(4, "jk", "W(j) W(k)", "W(k) W(j)", _neq, "j!=k"),
    _r(5, "jkl", "W(l) H(j,k)", "H(j,k) W(l)", _lnot, "j<k, l!=j,k"),
    _r(6, "jkl", "W(l) X(j,k)", "X(j,k) W(l)", _lnot, "j<k, l!=j,k"),
    _r(7, "jklt", "H(j,k) H(l,t)", "H(l,t) H(j,k)", _disjoint, "j<k, l<t, disjoint"),
    _r(8, "jklt", "H(j,k) X(l,t)", "X(l,t) H(j,k)", _disjoint, "j<k, l<t, disjoint"),
    _r(9, "jklt", "X(j,k) X(l,t)", "X(l,t) X(j,k)", _disjoint, "j<k, l<t, disjoint"),
    _r(10, "jk", "X(j,k) W(k)", "W(j) X(j,k)", _lt("j", "k"), "j<k"),
    _r(11, "jk", "X(j,k) W(j)", "W(k) X(j,k)", _lt("j", "k"), "j<k"),
    _r(12, "jkl", "X(j,k) X(j,l)", "X(k,l) X(j,k)", _lt("j", "k", "l"), "j<k<l"),
    _r(13, "jkl", "X(j,k) X(l,j)", "X(l,k) X(j,k)", _lt("l", "j", "k"), "l<j<k"),
    _r(14, "jkl", "X(j,k) H(j,l)", "H(k,l) X(j,k)", _lt("j", "k", "l"), "j<k<l"),
    _r(15, "jkl", "X(j,k) H(l,j)", "H(l,k) X(j,k)", _lt("l", "j", "k"), "l<j<k"),
    _r(16, "jk", "W(j) W(k) X(j,k)", "X(j,k) W(j) W(k)", _lt("j", "k"), "j<k"),
    _r(17, "jk", "W(j) W(k) H(j,k)", "H(j,k) W(j) W(k)", _lt("j", "k"), "j<k"),
    _r(18, "jk", "H(j,k) X(j,k)", "W(k)^4 H(j,k)", _lt("j", "k"), "j<k"),
    _r(19, "jk", "H(j,k) W(j)^2 H(j,k)", "W(j)^6 H(j,k) W(j)^3 W(k)^5", _lt("j", "k"), "j<k"),
    _r(20, "jklt", "H(j,k) H(l,t) H(j,l) H(k,t)", "H(j,l) H(k,t) H(j,k) H(l,t)",
       _lt("j", "k", "l", "t"), "j<k<l<t", 4),
    # derived relations
    _r(21, "jkl", "H(j,l) X(j,k)", "X(j,k) H(k,l)", _lt("j", "k", "l"), "j<k<l"),
    _r(22, "jkl", "H(l,j) X(j,k)", "X(j,k) H(l,k)", _lt("l", "j", "k"), "l<j<k"),
    _r(23, "jk", "X(j,k) H(j,k)", "H(j,k) W(k)^4", _lt("j", "k"), "j<k"),
    _r(24, "jk", "W(j)^2 H(j,k)", "W(k)^6 H(j,k) W(k)^2 W(j)^2", _lt("j", "k"), "j<k"),
    _r(25, "jkl", "X(j,l) H(k,l)", "H(j,k) W(k)^4 X(j,k) X(j,l)", _lt("j", "k", "l"), "j<k<l"),
    _r(26, "jk", "H(j,k) W(j)^2 H(j,k)", "X(j,k) W(k)^7 W(j) H(j,k) W(j)^2", _lt("j", "k"), "j<k"),
    _r(27, "jk", "H(j,k) W(j) X(j,k)", "W(j) W(k)^5 H(j,k) W(j)^7", _lt("j", "k"), "j<k"),
    _r(28, "jk", "H(j,k) W(j)^3 X(j,k)", "W(j)^7 W(k)^3 X(j,k) H(j,k) W(j)", _lt("j", "k"), "j<k"),
    _r(29, "jk", "H(j,k) W(j)^2 X(j,k)", "W(j)^6 W(k)^2 X(j,k) H(j,k) W(j)^2", _lt("j", "k"), "j<k"),
    _r(30, "jk", "H(j,k) W(j) X(j,k)", "W(j)^5 W(k) X(j,k) H(j,k) W(j)^3", _lt("j", "k"), "j<k"),
    _r(31, "", "H(3,4) H(1,2) X(2,3) H(1,2) H(3,4)", "H(1,3) H(2,4) X(2,3) H(2,4) H(1,3)",
       None, "", 4),
    _r(32, "", "H(3,4) H(1,2) X(2,3) H(1,2) H(3,4)", "H(2,3) H(1,4) X(2,4) H(1,4) H(2,3)",
       None, "", 4),
]

RULES: dict[int, RuleSchema] = {r.id: r for r in _TABLE}


def rule_table(n: int = 4) -> list[RuleSchema]:
    return [r for r in _TABLE if r.id <= 20 and r.min_dim <= n]


def derived_rules(n: int = 4) -> list[RuleSchema]:
    return [r for r in _TABLE if r.id > 20 and r.min_dim <= n]


def _gen(kind: str, args: tuple[int, ...]) -> Generator:
    return Generator(kind, args[0], args[1] if len(args) > 1 else 0)


def instantiate(side: Sequence[Atom], subst: dict) -> Word:
    return tuple(
        _gen(kind, tuple(a if isinstance(a, int) else subst[a] for a in args))
        for kind, args in side
    )


def instances(rule: RuleSchema, n: int) -> Iterator[dict]:
    """Every admissible substitution with indices in 1..n."""
    if n < rule.min_dim:
        return
    for vals in itertools.product(range(1, n + 1), repeat=len(rule.vars)):
        s = dict(zip(rule.vars, vals))
        if rule.admits(s):
            yield s


class RuleInstance(NamedTuple):
    rule: int
    direction: str  # "LR" or "RL"
    position: int
    subst: tuple  # sorted (var, value) pairs

    def inverse(self) -> RuleInstance:
        return self._replace(direction="RL" if self.direction == "LR" else "LR")

    def shifted(self, offset: int) -> RuleInstance:
        return self._replace(position=self.position + offset)

    @property
    def schema(self) -> RuleSchema:
        return RULES[self.rule]

    def subst_dict(self) -> dict:
        return dict(self.subst)


def make_instance(rule: int, direction: str, position: int, subst: dict) -> RuleInstance:
    return RuleInstance(rule, direction, position, tuple(sorted(subst.items())))


def match_rule(rule: RuleSchema, direction: str, word: Sequence[Generator], pos: int,
               partial: dict | None = None) -> dict | None:
    """Unify one side of ``rule`` with ``word`` at ``pos``; return the substitution."""
    side = rule.side(direction)
    if pos < 0 or pos + len(side) > len(word):
        return None
    s = dict(partial or {})
    for (kind, args), g in zip(side, word[pos:pos + len(side)]):
        if g.kind != kind:
            return None
        vals = (g.i,) if kind == "W" else (g.i, g.j)
        for a, v in zip(args, vals):
            if isinstance(a, int):
                if a != v:
                    return None
            elif s.setdefault(a, v) != v:
                return None
    if any(v not in s for v in rule.vars):
        return None
    if not rule.admits(s):
        return None
    return s


def apply_rule(word: Sequence[Generator], inst: RuleInstance, n: int | None = None) -> Word:
    """Rewrite ``word`` with one rule instance; raises NoMatch / ConstraintViolated."""
    rule = RULES.get(inst.rule)
    if rule is None:
        raise RuleError(f"unknown rule id {inst.rule}")
    if inst.direction not in ("LR", "RL"):
        raise RuleError(f"bad direction {inst.direction!r}")
    s = inst.subst_dict()
    if set(s) != set(rule.vars):
        raise RuleError(f"rule {rule.id} needs variables {','.join(rule.vars) or 'none'}")
    if not rule.admits(s):
        raise ConstraintViolated(f"rule {rule.id}: side condition {rule.condition} fails for {s}")
    if n is not None and (n < rule.min_dim or any(v > n for v in s.values())):
        raise ConstraintViolated(f"rule {rule.id}: indices exceed dimension {n}")
    src = instantiate(rule.side(inst.direction), s)
    dst = instantiate(rule.other(inst.direction), s)
    p = inst.position
    if p < 0 or tuple(word[p:p + len(src)]) != src:
        raise NoMatch(
            f"rule {rule.id} {inst.direction}: {format_word(src) or 'eps'} not found at position {p}"
        )
    return tuple(word[:p]) + dst + tuple(word[p + len(src):])


def invert_steps(steps: Sequence[RuleInstance]) -> list[RuleInstance]:
    return [s.inverse() for s in reversed(steps)]


# --------------------------------------------------------------------------
# tactics


class Proof:
    """Mutable proof state: a current word plus the steps taken so far."""

    def __init__(self, word: Sequence[Generator]):
        self.start: Word = tuple(word)
        self.word: Word = tuple(word)
        self.steps: list[RuleInstance] = []

    def rw(self, rule: int, direction: str, pos: int, **subst) -> Proof:
        schema = RULES[rule]
        full = match_rule(schema, direction, self.word, pos, subst)
        if full is None:
            raise NoMatch(
                f"rule {rule} {direction} does not match at {pos} in {format_word(self.word)}"
            )
        return self.step(make_instance(rule, direction, pos, full))

    def rw_insert(self, rule: int, pos: int, **subst) -> Proof:
        """Apply an insertion (right side is longer than the matched part)."""
        return self.step(make_instance(rule, "RL", pos, subst))

    def step(self, inst: RuleInstance) -> Proof:
        self.word = apply_rule(self.word, inst)
        self.steps.append(inst)
        return self

    def steps_at(self, steps: Iterable[RuleInstance], offset: int = 0) -> Proof:
        for s in steps:
            self.step(s.shifted(offset))
        return self

    # -- small moves

    def cancel(self, pos: int) -> Proof:
        """Remove X X, H H, or eight equal phases starting at ``pos``."""
        g = self.word[pos]
        if g.kind == "W":
            return self.rw(1, "LR", pos)
        return self.rw(2 if g.kind == "H" else 3, "LR", pos)

    def insert(self, pos: int, g: Generator) -> Proof:
        """Insert g g (for X, H) or g^8 (for w) before position ``pos``."""
        if g.kind == "W":
            return self.rw_insert(1, pos, j=g.i)
        return self.rw_insert(2 if g.kind == "H" else 3, pos, j=g.i, k=g.j)

    def swap(self, pos: int) -> Proof:
        """Rewrite the pair at pos, pos+1 with any two-letter relation."""
        for rid in _PAIR_RULES:
            for d in ("LR", "RL"):
                if match_rule(RULES[rid], d, self.word, pos) is not None:
                    return self.rw(rid, d, pos)
        a, b = self.word[pos], self.word[pos + 1]
        raise NoMatch(f"no pair relation for {a} {b}")

    def commute(self, pos: int) -> Proof:
        """Swap two commuting letters (identical letters are left alone)."""
        if self.word[pos] == self.word[pos + 1]:
            return self
        return self.swap(pos)

    def move(self, src: int, dst: int) -> Proof:
        """Move the letter at ``src`` to ``dst`` by successive pair rewrites.

        The moving letter may change (an X renames a phase it passes).
        """
        while src > dst:
            self.commute(src - 1)
            src -= 1
        while src < dst:
            self.commute(src)
            src += 1
        return self

    def arrange(self, start: int, target: Sequence[Generator]) -> Proof:
        """Reorder the phases in word[start:start+len(target)] into ``target``."""
        for i, g in enumerate(target):
            p = start + i
            q = p
            while self.word[q] != g:
                q += 1
                if q >= start + len(target):
                    raise NoMatch(f"{g} missing from segment")
            self.move(q, p)
        return self

    def reduce_phase(self, pos: int) -> Proof:
        """If eight equal phases start at pos, remove them."""
        return self.rw(1, "LR", pos)

    def expect(self, target: Sequence[Generator]) -> Proof:
        if self.word != tuple(target):
            raise AssertionError(
                f"proof ended at {format_word(self.word)!r}, expected {format_word(target)!r}"
            )
        return self


_PAIR_RULES = [4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 21, 22]


def W_(j: int, m: int = 1) -> Word:
    return (Generator("W", j, 0),) * m


def Hg(j: int, k: int) -> Generator:
    return Generator("H", j, k)


def Xg(j: int, k: int) -> Generator:
    return Generator("X", j, k)


# --------------------------------------------------------------------------
# derived relations


def _lhs(rule: int, **s) -> Word:
    return instantiate(RULES[rule].lhs, s)


def _rhs(rule: int, **s) -> Word:
    return instantiate(RULES[rule].rhs, s)


def _push_pairs(p: Proof, pos: int, m: int, kind: str) -> None:
    """Move (w[j] w[k])^m at pos.. rightwards past the two-level letter after it."""
    rid = 16 if kind == "X" else 17
    for i in range(m - 1, -1, -1):
        p.rw(rid, "LR", pos + 2 * i)


def _pull_pairs(p: Proof, pos: int, m: int, kind: str) -> None:
    """Move (w[j] w[k])^m right after the letter at pos to its left."""
    rid = 16 if kind == "X" else 17
    for i in range(m):
        p.rw(rid, "RL", pos + 2 * i)


def _d21(j, k, l):
    p = Proof(_lhs(21, j=j, k=k, l=l))
    p.insert(0, Xg(j, k))
    p.rw(14, "LR", 1)
    p.cancel(2)
    return p.expect(_rhs(21, j=j, k=k, l=l))


def _d22(j, k, l):
    p = Proof(_lhs(22, j=j, k=k, l=l))
    p.insert(0, Xg(j, k))
    p.rw(15, "LR", 1)
    p.cancel(2)
    return p.expect(_rhs(22, j=j, k=k, l=l))


def _d23(j, k):
    p = Proof(_lhs(23, j=j, k=k))
    p.insert(0, Hg(j, k))
    p.rw(18, "LR", 1)
    p.cancel(5)
    return p.expect(_rhs(23, j=j, k=k))


def _d24(j, k):
    # w^2[j] H -> w^8[k] w^2[j] H -> w^6[k] (w[j] w[k])^2 H -> w^6[k] H (w[j] w[k])^2
    p = Proof(_lhs(24, j=j, k=k))
    p.insert(0, Generator("W", k, 0))
    p.arrange(6, (W_(j) + W_(k)) * 2)
    _push_pairs(p, 6, 2, "H")
    p.arrange(7, W_(k, 2) + W_(j, 2))
    return p.expect(_rhs(24, j=j, k=k))


def _d25(j, k, l):
    # X[j,l] H[k,l] -> X[j,k] X[j,k] X[j,l] H[k,l] -> X[j,k] X[k,l] X[j,k] H[k,l]
    # -> X[j,k] X[k,l] H[j,l] X[j,k] -> X[j,k] H[j,k] X[k,l] X[j,k]
    # -> X[j,k] H[j,k] X[j,k] X[j,l] -> H[j,k] w^4[k] X[j,k] X[j,l]
    p = Proof(_lhs(25, j=j, k=k, l=l))
    p.insert(0, Xg(j, k))
    p.rw(12, "LR", 1)
    p.rw(21, "RL", 2)
    p.rw(22, "RL", 1)
    p.rw(12, "RL", 2)
    p.rw(23, "LR", 0)
    return p.expect(_rhs(25, j=j, k=k, l=l))


def _d26(j, k):
    p = Proof(_lhs(26, j=j, k=k))
    p.rw(19, "LR", 0)  # w^6[j] H w^3[j] w^5[k]
    p.arrange(7, W_(j) + W_(k) + W_(j, 2) + W_(k, 4))
    _pull_pairs(p, 6, 1, "H")  # w^7[j] w[k] H w^2[j] w^4[k]
    p.arrange(9, W_(k, 4) + W_(j, 2))
    p.rw(23, "RL", 8)  # w^7[j] w[k] X H w^2[j]
    p.move(8, 0)  # each phase changes index as X passes it
    p.arrange(1, W_(k, 7) + W_(j))
    return p.expect(_rhs(26, j=j, k=k))


def _d27(j, k):
    # H w[j] X -> H X w[k] -> w^4[k] H w[k] -> w^4[k] H w^8[j] w[k]
    # -> w^4[k] w[j] w[k] H w^7[j]
    p = Proof(_lhs(27, j=j, k=k))
    p.rw(10, "RL", 1)
    p.rw(18, "LR", 0)
    p.insert(5, Generator("W", j, 0))
    p.arrange(5, W_(j) + W_(k) + W_(j, 7))
    _pull_pairs(p, 4, 1, "H")
    p.arrange(0, W_(j) + W_(k, 5))
    return p.expect(_rhs(27, j=j, k=k))


def _d28_30(rid, j, k):
    # H w^a[j] X -> H X w^a[k] -> w^4[k] H w^a[k] -> w^4[k] X X H w^a[k]
    # -> w^4[k] X H w^(4+a)[k] -> w^4[k] X H (w[j] w[k])^(4+a) w^(4-a)[j]
    # -> w^4[k] (w[j] w[k])^(4+a) X H w^(4-a)[j] -> w^(4+a)[j] w^a[k] X H w^(4-a)[j]
    a = {28: 3, 29: 2, 30: 1}[rid]
    m = 4 + a
    p = Proof(_lhs(rid, j=j, k=k))
    p.move(1 + a, 1)
    p.rw(18, "LR", 0)
    p.insert(4, Xg(j, k))
    p.rw(23, "LR", 5)
    p.insert(6, Generator("W", j, 0))
    p.arrange(6, (W_(j) + W_(k)) * m + W_(j, 8 - m))
    _pull_pairs(p, 5, m, "H")
    _pull_pairs(p, 4, m, "X")
    p.arrange(0, W_(k, 8) + W_(j, m) + W_(k, a))
    p.cancel(0)
    return p.expect(_rhs(rid, j=j, k=k))


def _d31():
    p = Proof(_lhs(31))
    p.rw(15, "LR", 2)  # H34 H12 H13 X23 H34
    p.rw(21, "RL", 3)  # H34 H12 H13 H24 X23
    p.rw(7, "LR", 0)  # H12 H34 H13 H24 X23
    p.rw(20, "LR", 0, j=1, k=2, l=3, t=4)  # H13 H24 H12 H34 X23
    p.rw(14, "RL", 3)  # H13 H24 H12 X23 H24
    p.rw(22, "LR", 2)  # H13 H24 X23 H13 H24
    p.rw(7, "LR", 3)  # H13 H24 X23 H24 H13
    return p.expect(_rhs(31))


def _d32():
    p = Proof(_lhs(32))
    p.insert(5, Xg(3, 4))  # H34 H12 X23 H12 H34 X34 X34
    p.rw(18, "LR", 4)  # H34 H12 X23 H12 w^4[4] H34 X34
    for i in range(4):
        p.move(4 + i, 1 + i)  # H34 w^4[4] H12 X23 H12 H34 X34
    p.rw(23, "RL", 0)  # X34 H34 H12 X23 H12 H34 X34
    p.rw(31, "LR", 1)  # X34 H13 H24 X23 H24 H13 X34
    p.rw(7, "LR", 1)  # X34 H24 H13 X23 H24 H13 X34
    p.rw(7, "LR", 4)  # X34 H24 H13 X23 H13 H24 X34
    # carry the left X34 to the right end
    p.rw(22, "RL", 0)  # H23 X34 H13 X23 H13 H24 X34
    p.rw(15, "LR", 1)  # H23 H14 X34 X23 H13 H24 X34
    p.rw(13, "LR", 2)  # H23 H14 X24 X34 H13 H24 X34
    p.rw(15, "LR", 3)  # H23 H14 X24 H14 X34 H24 X34
    p.rw(22, "RL", 4)  # H23 H14 X24 H14 H23 X34 X34
    p.cancel(5)
    return p.expect(_rhs(32))


_BUILDERS = {
    21: lambda s: _d21(s["j"], s["k"], s["l"]),
    22: lambda s: _d22(s["j"], s["k"], s["l"]),
    23: lambda s: _d23(s["j"], s["k"]),
    24: lambda s: _d24(s["j"], s["k"]),
    25: lambda s: _d25(s["j"], s["k"], s["l"]),
    26: lambda s: _d26(s["j"], s["k"]),
    27: lambda s: _d27(s["j"], s["k"]),
    28: lambda s: _d28_30(28, s["j"], s["k"]),
    29: lambda s: _d28_30(29, s["j"], s["k"]),
    30: lambda s: _d28_30(30, s["j"], s["k"]),
    31: lambda s: _d31(),
    32: lambda s: _d32(),
}


@lru_cache(maxsize=None)
def derived_proof(rid: int, subst: tuple) -> tuple[RuleInstance, ...]:
    """Stored derivation of a derived rule's lhs into its rhs (position 0)."""
    return tuple(_BUILDERS[rid](dict(subst)).steps)


@lru_cache(maxsize=None)
def _expanded(rid: int, subst: tuple) -> tuple[RuleInstance, ...]:
    return tuple(expand_steps(derived_proof(rid, subst)))


def expand_steps(steps: Iterable[RuleInstance]) -> Iterator[RuleInstance]:
    """Replace derived-rule steps by their proofs, recursively."""
    for st in steps:
        if st.rule <= 20:
            yield st
            continue
        body = _expanded(st.rule, st.subst)
        if st.direction == "RL":
            body = invert_steps(body)
        for b in body:
            yield b.shifted(st.position)


# --------------------------------------------------------------------------
# derivations


def format_step(st: RuleInstance) -> str:
    sub = ",".join(f"{k}={v}" for k, v in st.subst) or "-"
    return f"{st.rule} {st.direction} {st.position} {sub}"


def parse_step(line: str) -> RuleInstance:
    parts = line.split()
    if len(parts) not in (3, 4):
        raise RuleError(f"bad derivation line {line!r}")
    rid, direction, pos = int(parts[0]), parts[1], int(parts[2])
    subst = {}
    if len(parts) == 4 and parts[3] != "-":
        for kv in parts[3].split(","):
            k, v = kv.split("=")
            subst[k.strip()] = int(v)
    return make_instance(rid, direction, pos, subst)


@dataclass
class Derivation:
    """start ~> end by the listed rule instances.

    ``steps`` may be a list or a zero-argument callable returning an
    iterator, so very large certificates can be streamed.
    """

    start: Word
    end: Word
    steps: object = field(default_factory=list)

    def iter_steps(self) -> Iterator[RuleInstance]:
        s = self.steps
        return iter(s()) if callable(s) else iter(s)

    def expanded(self) -> Derivation:
        src = self.steps
        return Derivation(self.start, self.end, lambda: expand_steps(
            src() if callable(src) else src))

    def replay(self, n: int | None = None, check_semantics: bool = False,
               dim: int = 4, table1_only: bool = False,
               check_instances: bool = False) -> dict:
        """Replay every step; returns simple statistics.  Raises on failure.

        ``check_semantics`` re-evaluates the whole word after each step;
        ``check_instances`` only evaluates both sides of each distinct rule
        instance, which suffices because equality is a congruence.
        """
        w = self.start
        count = 0
        longest = len(w)
        used: dict[int, int] = {}
        ref = evaluate(w, dim) if check_semantics else None
        seen: set = set()
        for st in self.iter_steps():
            if table1_only and st.rule > 20:
                raise RuleError(f"derived rule {st.rule} in a certificate restricted to rules 1-20")
            if check_instances and (st.rule, st.subst) not in seen:
                seen.add((st.rule, st.subst))
                r, s = RULES[st.rule], st.subst_dict()
                if evaluate(instantiate(r.lhs, s), dim) != evaluate(instantiate(r.rhs, s), dim):
                    raise RuleError(f"step {count + 1} ({format_step(st)}) is not sound")
            w = apply_rule(w, st, n)
            count += 1
            used[st.rule] = used.get(st.rule, 0) + 1
            longest = max(longest, len(w))
            if check_semantics and evaluate(w, dim) != ref:
                raise RuleError(f"step {count} ({format_step(st)}) changed the operator")
        if w != tuple(self.end):
            raise RuleError(
                f"replay ended at {format_word(w)!r}, expected {format_word(self.end)!r}"
            )
        return {"steps": count, "max_len": longest, "rules": dict(sorted(used.items()))}

    def lines(self) -> Iterator[str]:
        for st in self.iter_steps():
            yield format_step(st)

    def inverse(self) -> Derivation:
        steps = list(self.iter_steps())
        return Derivation(self.end, self.start, invert_steps(steps))


def parse_derivation(text: str) -> list[RuleInstance]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_step(line))
    return out


__all__ += ["instantiate", "make_instance", "parse_step", "W_", "Hg", "Xg"]


# --------------------------------------------------------------------------
# basic-generator decomposition


@lru_cache(maxsize=None)
def to_basic_proof(g: Generator) -> tuple[RuleInstance, ...]:
    """Steps rewriting the one-letter word ``g`` into ``to_basic(g)``."""
    p = Proof((g,))
    if is_basic(g):
        return ()
    if g.kind == "X":
        j, k = g.i, g.j
        p.insert(1, Xg(k - 1, k))
        p.rw(13, "RL", 0)  # X[k-1,k] X[j,k-1] X[k-1,k]
        p.steps_at(to_basic_proof(Xg(j, k - 1)), 1)
    elif g.kind == "W":
        x = Xg(1, g.i)
        p.insert(1, x)
        p.rw(11, "RL", 0)  # X[1,i] w[1] X[1,i]
        inner = to_basic_proof(x)
        p.steps_at(inner, 2)
        p.steps_at(inner, 0)
    elif g.i == 1:
        x = Xg(2, g.j)
        p.insert(0, x)
        p.rw(22, "RL", 1)  # X[2,k] H[1,2] X[2,k]
        inner = to_basic_proof(x)
        p.steps_at(inner, 2)
        p.steps_at(inner, 0)
    else:
        x = Xg(1, g.i)
        p.insert(1, x)
        p.rw(14, "RL", 0)  # X[1,j] H[1,k] X[1,j]
        inner = to_basic_proof(x)
        p.steps_at(inner, 2)
        p.steps_at(to_basic_proof(Hg(1, g.j)), 1)
        p.steps_at(inner, 0)
    p.expect(to_basic(g))
    return tuple(p.steps)


def word_to_basic_proof(w: Sequence[Generator]) -> list[RuleInstance]:
    """Steps rewriting ``w`` into ``word_to_basic(w)``, right to left."""
    steps: list[RuleInstance] = []
    for pos in range(len(w) - 1, -1, -1):
        steps.extend(s.shifted(pos) for s in to_basic_proof(w[pos]))
    return steps


__all__ += ["to_basic_proof", "word_to_basic_proof"]
