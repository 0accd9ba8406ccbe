"""Words over the generators X[j,k], H[j,k], w[j].

A word is a plain tuple of ``Generator`` values.  The leftmost generator is
applied last, so ``evaluate("H[1,2] w[1]")`` is ``[[H]] * [[w]]``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .linalg import (
    GenMatrix,
    Generator,
    H,
    LinalgError,
    W,
    X,
    apply_generator,
    identity,
)

__all__ = [
    "Word",
    "WordError",
    "parse_word",
    "format_word",
    "evaluate",
    "evaluate_on",
    "extent",
    "inverse",
    "to_basic",
    "is_basic",
    "EPSILON",
]

Word = tuple  # tuple[Generator, ...]
EPSILON: Word = ()


class WordError(ValueError):
    """Syntax or index error, with the character offset when known."""

    def __init__(self, msg: str, pos: int | None = None):
        super().__init__(msg if pos is None else f"{msg} (at offset {pos})")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[wWXH])(?:\^(?P<pow>\d+))?\[(?P<i>\d+)(?:,(?P<j>\d+))?\]|(?P<eps>eps|ε))"
)


def parse_word(text: str, n: int | None = None) -> Word:
    """Parse whitespace-separated tokens; ``w^3[1]`` expands to three w[1]."""
    out: list[Generator] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordError(f"unexpected input {text[pos:].strip()[:12]!r}", pos)
        if m.end() < len(text) and not text[m.end()].isspace():
            raise WordError("tokens must be separated by whitespace", m.end())
        pos = m.end()
        if m.group("eps"):
            continue
        name = m.group("name")
        i = int(m.group("i"))
        j = m.group("j")
        power = int(m.group("pow")) if m.group("pow") is not None else 1
        try:
            if name in "wW":
                if j is not None:
                    raise WordError("w takes a single index", m.start())
                g = W(i)
            else:
                if j is None:
                    raise WordError(f"{name} needs two indices", m.start())
                g = X(i, int(j)) if name == "X" else H(i, int(j))
        except LinalgError as exc:
            raise WordError(str(exc), m.start()) from None
        if n is not None and g.extent > n:
            raise WordError(f"{g} exceeds dimension {n}", m.start())
        out.extend([g] * power)
    return tuple(out)


def format_word(w: Sequence[Generator]) -> str:
    """Canonical text; runs of the same phase are written ``w^m[j]``."""
    parts: list[str] = []
    i = 0
    while i < len(w):
        g = w[i]
        run = 1
        if g.kind == "W":
            while i + run < len(w) and w[i + run] == g:
                run += 1
        parts.append(str(g) if run == 1 else f"w^{run}[{g.i}]")
        i += run
    return " ".join(parts)


def extent(w) -> int:
    if isinstance(w, Generator):
        return w.extent
    return max((g.extent for g in w), default=0)


def evaluate_on(w: Sequence[Generator], M: GenMatrix) -> GenMatrix:
    """[[w]] * M."""
    for g in reversed(w):
        M = apply_generator(g, M)
    return M


def evaluate(w: Sequence[Generator], n: int) -> GenMatrix:
    if extent(w) > n:
        raise WordError(f"word extent {extent(w)} exceeds dimension {n}")
    return evaluate_on(w, identity(n))


def inverse_gen(g: Generator) -> Word:
    if g.kind == "W":
        return (g,) * 7
    return (g,)


def inverse(w: Sequence[Generator]) -> Word:
    """Reverse the word; w[j] becomes w^7[j], X and H are self-inverse."""
    out: list[Generator] = []
    for g in reversed(w):
        out.extend(inverse_gen(g))
    return tuple(out)


def is_basic(g: Generator) -> bool:
    if g.kind == "X":
        return g.j == g.i + 1
    if g.kind == "H":
        return g.i == 1 and g.j == 2
    return g.i == 1


def to_basic(g: Generator) -> Word:
    """Decompose a generator into X[a,a+1], H[1,2] and w[1]."""
    if is_basic(g):
        return (g,)
    if g.kind == "X":
        j, k = g.i, g.j
        outer = (X(k - 1, k),)
        return outer + to_basic(X(j, k - 1)) + outer
    if g.kind == "W":
        conj = to_basic(X(1, g.i))
        return conj + (W(1),) + conj
    j, k = g.i, g.j
    if j == 1:
        conj = to_basic(X(2, k))
        return conj + (H(1, 2),) + conj
    conj = to_basic(X(1, j))
    return conj + to_basic(H(1, k)) + conj


def word_to_basic(w: Iterable[Generator]) -> Word:
    out: list[Generator] = []
    for g in w:
        out.extend(to_basic(g))
    return tuple(out)


__all__ += ["word_to_basic", "inverse_gen"]


_RULE_NAMES = {"rule_table", "derived_rules", "apply_rule", "RuleSchema", "RuleInstance"}


def __getattr__(name: str):
    # the relation tables live in .rules, which itself imports this module
    if name in _RULE_NAMES:
        from . import rules

        return getattr(rules, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
