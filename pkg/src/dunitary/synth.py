"""Exact synthesis: reduce a unitary over D[omega] to the identity.

Each iteration looks at the rightmost non-trivial column and emits one
syllable.  A column with lde 0 is a phased basis vector and is moved into
place by ``w^m[j] X[l,j]``; otherwise the first two entries that are 1 mod
delta are paired by ``H[i,l] w^z[i]``, which lowers the level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .linalg import (
    GenMatrix,
    Generator,
    H,
    Level,
    W,
    X,
    apply_generator,
    is_unitary,
    pivot_column,
)
from .ring import CycInt, RingElem, RingError, omega_exponent_mod_delta3
from ._backend import kernels as _k

__all__ = [
    "SynthError",
    "SylW",
    "SylWX",
    "SylHW",
    "Syllable",
    "sync_pair",
    "column_step",
    "unit_vector_form",
    "next_syllable",
    "synthesize",
    "iter_synthesis",
    "flatten",
]


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class SylW:
    """w^m[j]."""

    m: int
    j: int

    def word(self) -> tuple[Generator, ...]:
        return (W(self.j),) * (self.m % 8)

    def __str__(self) -> str:
        return f"W({self.m},{self.j})"


@dataclass(frozen=True)
class SylWX:
    """w^m[j] X[l,j]; the X acts first."""

    m: int
    l: int
    j: int

    def word(self) -> tuple[Generator, ...]:
        return (W(self.j),) * (self.m % 8) + (X(self.l, self.j),)

    def __str__(self) -> str:
        return f"WX({self.m},{self.l},{self.j})"


@dataclass(frozen=True)
class SylHW:
    """H[i,l] w^z[i]; the phase acts first."""

    i: int
    l: int
    z: int

    def word(self) -> tuple[Generator, ...]:
        return (H(self.i, self.l),) + (W(self.i),) * (self.z % 8)

    def __str__(self) -> str:
        return f"HW({self.i},{self.l},{self.z})"


Syllable = Union[SylW, SylWX, SylHW]


def flatten(syls: Sequence[Syllable]) -> tuple[Generator, ...]:
    """Word whose action is applying the syllables in list order.

    The leftmost generator acts last, so later syllables go to the left.
    """
    out: list[Generator] = []
    for s in reversed(syls):
        out.extend(s.word())
    return tuple(out)


def sync_pair(u1: CycInt, u2: CycInt) -> int:
    """The z in 0..3 for which H w^z[1] sends (u1, u2) to multiples of delta."""
    try:
        e1 = omega_exponent_mod_delta3(u1)
        e2 = omega_exponent_mod_delta3(u2)
    except RingError:
        raise SynthError("sync_pair needs both entries congruent to 1 mod delta") from None
    return (e2 - e1) % 4


def _scaled_column(v: Sequence[RingElem]) -> tuple[int, list]:
    k = max(e.k for e in v)
    return k, [e.scaled(k) for e in v]


def _odd_rows(u: Sequence[tuple]) -> list[int]:
    return [i for i, x in enumerate(u) if _k.parity(x)]


def column_step(v: Sequence[RingElem]) -> list[SylHW]:
    """Syllables that pair off every entry of delta^k v that is 1 mod delta."""
    k, u = _scaled_column(v)
    if k == 0:
        raise SynthError("column_step needs a column with lde > 0")
    odd = _odd_rows(u)
    if len(odd) % 2:
        raise SynthError("not a unit vector: odd number of entries are 1 mod delta")
    return [
        SylHW(a + 1, b + 1, sync_pair(u[a], u[b]))
        for a, b in zip(odd[0::2], odd[1::2])
    ]


def unit_vector_form(v: Sequence[RingElem]) -> tuple[int, int]:
    """(s, l) with v = w^l e_s, 1-based s and l in 1..8."""
    if any(e.k for e in v):
        raise SynthError("entries not in Z[omega]")
    nz = [i for i, e in enumerate(v) if e]
    if len(nz) != 1:
        raise SynthError("not a unit vector of the form w^l e_s")
    s = nz[0]
    x = v[s].num
    for l in range(1, 9):
        if tuple(x) == _k.omega_pow((0, 0, 0, 1), l):
            return s + 1, l
    raise SynthError("not a unit vector of the form w^l e_s")


def syllable_for_column(j: int, v: Sequence[RingElem]) -> Syllable:
    k, u = _scaled_column(v)
    if k == 0:
        s, m = unit_vector_form(v)
        if s > j:
            raise SynthError("non-unitary input: column has support below the pivot")
        ph = (8 - m) % 8
        return SylW(ph, j) if s == j else SylWX(ph, s, j)
    odd = _odd_rows(u)
    if len(odd) < 2:
        raise SynthError("non-unitary input: cannot pair residues")
    a, b = odd[0], odd[1]
    return SylHW(a + 1, b + 1, sync_pair(u[a], u[b]))


def next_syllable(M: GenMatrix) -> Syllable:
    pc = pivot_column(M)
    if pc is None:
        raise SynthError("the identity has no next syllable")
    return syllable_for_column(*pc)


def apply_syllable(s: Syllable, M: GenMatrix) -> GenMatrix:
    for g in reversed(s.word()):
        M = apply_generator(g, M)
    return M


def iter_synthesis(M: GenMatrix) -> Iterator[tuple[Syllable, GenMatrix]]:
    """Yield (syllable, state after it) until the identity is reached."""
    while True:
        pc = pivot_column(M)
        if pc is None:
            return
        s = syllable_for_column(*pc)
        M = apply_syllable(s, M)
        yield s, M


def synthesize(M: GenMatrix, check: bool = True) -> list[Syllable]:
    """Syllables S_1..S_l (in output order) with S_l ... S_1 M = I."""
    if check and not is_unitary(M):
        raise SynthError("non-unitary input")
    return [s for s, _ in iter_synthesis(M)]


def synthesize_with_levels(M: GenMatrix) -> list[tuple[Syllable, Level, Level]]:
    """Like synthesize, also reporting the level before and after each syllable."""
    from .linalg import level

    out = []
    before = level(M)
    for s, M in iter_synthesis(M):
        after = level(M)
        out.append((s, before, after))
        before = after
    return out


__all__ += ["apply_syllable", "syllable_for_column", "synthesize_with_levels"]
