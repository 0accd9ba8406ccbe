"""Vectors and unitary matrices over D[omega], plus the generator set.

Matrices are dense tuples of rows, immutable and hashable.  Generators act
by left multiplication: ``apply_generator(g, M)`` is ``[[g]] * M`` and touches
only the one or two rows named by ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .ring import (
    R_ONE,
    R_ZERO,
    RingElem,
    RingError,
    format_ring_elem,
    parse_ring_elem,
)

__all__ = [
    "Generator",
    "GenMatrix",
    "Level",
    "LinalgError",
    "X",
    "H",
    "W",
    "apply_generator",
    "is_unitary",
    "pivot_column",
    "level",
    "identity",
    "tensor",
    "clifford_t_gates",
    "parse_matrix",
    "format_matrix",
]


class LinalgError(ValueError):
    pass


class Generator(NamedTuple):
    """One of X[i,j], H[i,j] (1 <= i < j) or w[i]; ``j`` is 0 for w."""

    kind: str
    i: int
    j: int = 0

    @property
    def extent(self) -> int:
        return self.j if self.kind != "W" else self.i

    def __str__(self) -> str:
        if self.kind == "W":
            return f"w[{self.i}]"
        return f"{self.kind}[{self.i},{self.j}]"

    def __repr__(self) -> str:
        return str(self)


def X(i: int, j: int) -> Generator:
    if not 1 <= i < j:
        raise LinalgError(f"X[{i},{j}]: indices must satisfy 1 <= i < j")
    return Generator("X", i, j)


def H(i: int, j: int) -> Generator:
    if not 1 <= i < j:
        raise LinalgError(f"H[{i},{j}]: indices must satisfy 1 <= i < j")
    return Generator("H", i, j)


def W(i: int) -> Generator:
    if i < 1:
        raise LinalgError(f"w[{i}]: index must be positive")
    return Generator("W", i, 0)


class GenMatrix(NamedTuple):
    """n x n matrix over D[omega], stored as a tuple of row tuples."""

    rows: tuple

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> RingElem:
        """Entry at 0-based (i, j)."""
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        """Column j, 0-based."""
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other: GenMatrix) -> GenMatrix:
        n = self.n
        cols = [other.column(j) for j in range(n)]
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = R_ZERO
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return GenMatrix(tuple(out))

    def adjoint(self) -> GenMatrix:
        n = self.n
        return GenMatrix(tuple(tuple(self.rows[j][i].conj() for j in range(n)) for i in range(n)))

    def is_identity(self) -> bool:
        return self == identity(self.n)

    def __str__(self) -> str:
        return format_matrix(self)


_IDENT_CACHE: dict[int, GenMatrix] = {}


def identity(n: int) -> GenMatrix:
    m = _IDENT_CACHE.get(n)
    if m is None:
        m = GenMatrix(tuple(tuple(R_ONE if i == j else R_ZERO for j in range(n)) for i in range(n)))
        _IDENT_CACHE[n] = m
    return m


def from_entries(entries: Sequence[Sequence]) -> GenMatrix:
    rows = []
    for r in entries:
        rows.append(tuple(e if isinstance(e, RingElem) else RingElem.from_cycint(e) if isinstance(e, tuple) else RingElem.from_int(e) for e in r))
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise LinalgError("matrix must be square")
    return GenMatrix(tuple(rows))


def apply_generator(g: Generator, M: GenMatrix) -> GenMatrix:
    """Return [[g]] * M."""
    n = M.n
    if g.extent > n:
        raise LinalgError(f"{g} exceeds dimension {n}")
    rows = list(M.rows)
    kind = g.kind
    if kind == "W":
        a = g.i - 1
        rows[a] = tuple(e.times_omega(1) for e in rows[a])
    elif kind == "X":
        a, b = g.i - 1, g.j - 1
        rows[a], rows[b] = rows[b], rows[a]
    else:
        a, b = g.i - 1, g.j - 1
        ra, rb = rows[a], rows[b]
        rows[a] = tuple((x + y).div_sqrt2() for x, y in zip(ra, rb))
        rows[b] = tuple((x - y).div_sqrt2() for x, y in zip(ra, rb))
    return GenMatrix(tuple(rows))


def apply_to_vector(g: Generator, v: Sequence[RingElem]) -> tuple:
    v = list(v)
    if g.kind == "W":
        v[g.i - 1] = v[g.i - 1].times_omega(1)
    elif g.kind == "X":
        a, b = g.i - 1, g.j - 1
        v[a], v[b] = v[b], v[a]
    else:
        a, b = g.i - 1, g.j - 1
        x, y = v[a], v[b]
        v[a] = (x + y).div_sqrt2()
        v[b] = (x - y).div_sqrt2()
    return tuple(v)


def generator_matrix(g: Generator, n: int) -> GenMatrix:
    return apply_generator(g, identity(n))


def is_unitary(M: GenMatrix) -> bool:
    """Exact test of M^dagger M = I."""
    return (M.adjoint() @ M).is_identity()


def pivot_column(M: GenMatrix):
    """(j, column) for the greatest 1-based j with M e_j != e_j, or None for I."""
    n = M.n
    for j in range(n - 1, -1, -1):
        col = M.column(j)
        for i, e in enumerate(col):
            if e != (R_ONE if i == j else R_ZERO):
                return j + 1, col
    return None


@dataclass(frozen=True, order=True)
class Level:
    """(pivot column, its lde, number of entries attaining that lde)."""

    j: int
    k: int
    m: int

    def __str__(self) -> str:
        return f"({self.j},{self.k},{self.m})"


LEVEL_ZERO = Level(0, 0, 0)


def column_level(j: int, col: Iterable[RingElem]) -> Level:
    ks = [e.k for e in col]
    k = max(ks)
    return Level(j, k, ks.count(k) if k > 0 else 0)


def level(M: GenMatrix, check: bool = False) -> Level:
    if check and not is_unitary(M):
        raise LinalgError("level is only defined for unitary matrices")
    pc = pivot_column(M)
    if pc is None:
        return LEVEL_ZERO
    return column_level(*pc)


def tensor(A: GenMatrix, B: GenMatrix) -> GenMatrix:
    """Kronecker product A (x) B."""
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append(tuple(x * y for x in ra for y in rb))
    return GenMatrix(tuple(rows))


def clifford_t_gates() -> dict[str, GenMatrix]:
    """Two-qubit Clifford+T gates as exact 4x4 matrices.

    Suffix 1 acts on the first (most significant) qubit, suffix 2 on the second.
    """
    inv_sqrt2 = R_ONE.div_sqrt2()
    h = from_entries([[inv_sqrt2, inv_sqrt2], [inv_sqrt2, -inv_sqrt2]])
    s = from_entries([[R_ONE, R_ZERO], [R_ZERO, R_ONE.times_omega(2)]])
    t = from_entries([[R_ONE, R_ZERO], [R_ZERO, R_ONE.times_omega(1)]])
    i2 = identity(2)
    out = {"OMEGA": GenMatrix(tuple(tuple(e.times_omega(1) for e in r) for r in identity(4).rows))}
    for name, g in (("H", h), ("S", s), ("T", t)):
        out[f"{name}1"] = tensor(g, i2)
        out[f"{name}2"] = tensor(i2, g)
    out["CNOT"] = from_entries(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    )
    return out


def parse_matrix(text: str) -> GenMatrix:
    """Line 1 is n, then n lines of ``;``-separated ring elements."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise LinalgError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise LinalgError(f"first line must be the dimension, got {lines[0].strip()!r}") from None
    if n < 1:
        raise LinalgError("dimension must be at least 1")
    if len(lines) != n + 1:
        raise LinalgError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(";")
        if len(parts) != n:
            raise LinalgError(f"expected {n} entries per row, found {len(parts)}")
        try:
            rows.append(tuple(parse_ring_elem(p) for p in parts))
        except RingError as exc:
            raise LinalgError(str(exc)) from None
    return GenMatrix(tuple(rows))


def format_matrix(M: GenMatrix) -> str:
    lines = [str(M.n)]
    for r in M.rows:
        lines.append(";".join(format_ring_elem(e) for e in r))
    return "\n".join(lines) + "\n"
