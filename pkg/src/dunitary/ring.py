"""Exact arithmetic in Z[omega] and D[omega] = Z[1/sqrt2, i].

``CycInt`` is a cyclotomic integer a*w^3 + b*w^2 + c*w + d with ``w = e^{i pi/4}``.
``RingElem`` is ``num / delta^k`` with ``delta = 1 + w``, always stored with the
least possible ``k``.  Both are immutable tuples, so they hash and compare
cheaply, which matters because the rewriting engine memoizes on matrices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from ._backend import kernels as _k

__all__ = [
    "CycInt",
    "RingElem",
    "Residue",
    "RingError",
    "NotDivisible",
    "zw_mul",
    "zw_conj",
    "constants",
    "delta_divide",
    "delta_divides_pow",
    "lde",
    "residue",
    "omega_exponent_mod_delta3",
    "check_add_conj",
    "residue_pattern_sum",
    "parse_ring_elem",
    "format_ring_elem",
    "RESIDUE_REPS",
]


class RingError(ValueError):
    """Raised for values outside the ring or violated preconditions."""


class NotDivisible(RingError):
    pass


class CycInt(NamedTuple):
    """a*w^3 + b*w^2 + c*w + d."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, n: int) -> CycInt:
        return cls(0, 0, 0, n)

    @classmethod
    def omega(cls, m: int = 1) -> CycInt:
        return _wrap(_k.omega_pow((0, 0, 0, 1), m))

    def __add__(self, other):  # type: ignore[override]
        return _wrap(_k.add(self, _coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return _wrap(_k.sub(self, _coerce(other)))

    def __rsub__(self, other):
        return _wrap(_k.sub(_coerce(other), self))

    def __mul__(self, other):  # type: ignore[override]
        if isinstance(other, int):
            return _wrap(_k.scale(self, other))
        if isinstance(other, RingElem):
            return RingElem.from_cycint(self) * other
        return _wrap(_k.mul(self, other))

    def __rmul__(self, other):  # type: ignore[override]
        if isinstance(other, int):
            return _wrap(_k.scale(self, other))
        return NotImplemented

    def __neg__(self) -> CycInt:
        return _wrap(_k.neg(self))

    def __pow__(self, e: int) -> CycInt:
        if e < 0:
            raise RingError("negative power of a cyclotomic integer")
        out, base = ONE, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> CycInt:
        return _wrap(_k.conj(self))

    def times_omega(self, m: int) -> CycInt:
        return _wrap(_k.omega_pow(self, m))

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CycInt({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c},{self.d})"

    def to_complex(self) -> complex:
        """Floating rendering, for display only."""
        w = complex(2 ** -0.5, 2 ** -0.5)
        return self.a * w ** 3 + self.b * w ** 2 + self.c * w + self.d


_new_cyc = tuple.__new__


def _wrap(t) -> CycInt:
    return _new_cyc(CycInt, t)


def _coerce(x) -> tuple:
    if isinstance(x, int):
        return (0, 0, 0, x)
    return x


ZERO = CycInt(0, 0, 0, 0)
ONE = CycInt(0, 0, 0, 1)
OMEGA = CycInt(0, 0, 1, 0)
DELTA = CycInt(0, 0, 1, 1)
SQRT2 = CycInt(-1, 0, 1, 0)
I_UNIT = CycInt(0, 1, 0, 0)
LAMBDA = CycInt(-1, 0, 1, 1)
LAMBDA_INV = CycInt(-1, 0, 1, -1)
# w * lambda; 1/sqrt2 = OMEGA_LAMBDA / delta^2
OMEGA_LAMBDA = CycInt(0, 1, 1, 1)


def zw_mul(x: CycInt, y: CycInt) -> CycInt:
    return _wrap(_k.mul(x, y))


def zw_conj(x: CycInt) -> CycInt:
    return _wrap(_k.conj(x))


def constants() -> dict[str, CycInt]:
    return {
        "sqrt2": SQRT2,
        "i": I_UNIT,
        "lambda": LAMBDA,
        "delta": DELTA,
        "lambda_inv": LAMBDA_INV,
    }


def delta_divide(x: CycInt) -> CycInt:
    """Return x / delta, raising NotDivisible if delta does not divide x."""
    q = _k.div_delta(x)
    if q is None:
        raise NotDivisible(f"{x} is not divisible by delta")
    return _wrap(q)


def delta_divides_pow(x: tuple, p: int) -> bool:
    """True iff delta^p divides x."""
    for _ in range(p):
        x = _k.div_delta(x)
        if x is None:
            return False
    return True


class RingElem(NamedTuple):
    """num / delta^k in least-delta-exponent form."""

    num: CycInt
    k: int

    @classmethod
    def make(cls, num, k: int = 0) -> RingElem:
        if k < 0:
            num = _k.mul_delta_pow(num, -k)
            k = 0
        q, k = _k.reduce(num, k)
        return _new_re(cls, (_wrap(q), k))

    @classmethod
    def from_cycint(cls, x) -> RingElem:
        return _new_re(cls, (_wrap(_coerce(x)), 0))

    @classmethod
    def from_int(cls, n: int) -> RingElem:
        return _new_re(cls, (CycInt(0, 0, 0, n), 0))

    @classmethod
    def from_dyadic(cls, num, l: int) -> RingElem:
        """(a,b,c,d) / 2^l, using 1/2 = w^2 lambda^2 / delta^4."""
        num = _coerce(num)
        if l < 0:
            return cls.make(_k.scale(num, 2 ** -l), 0)
        u = _k.mul(_k.omega_pow((-1, 0, 1, 1), 2), (-1, 0, 1, 1))  # w^2 lambda^2
        f = (0, 0, 0, 1)
        for _ in range(l):
            f = _k.mul(f, u)
        return cls.make(_k.mul(num, f), 4 * l)

    def __add__(self, other):  # type: ignore[override]
        other = _as_elem(other)
        ka, kb = self.k, other.k
        if ka == kb:
            return RingElem.make(_k.add(self.num, other.num), ka)
        if ka > kb:
            return RingElem.make(_k.add(self.num, _k.mul_delta_pow(other.num, ka - kb)), ka)
        return RingElem.make(_k.add(_k.mul_delta_pow(self.num, kb - ka), other.num), kb)

    __radd__ = __add__

    def __neg__(self) -> RingElem:
        return _new_re(RingElem, (_wrap(_k.neg(self.num)), self.k))

    def __sub__(self, other):
        return self + (-_as_elem(other))

    def __rsub__(self, other):
        return _as_elem(other) + (-self)

    def __mul__(self, other):  # type: ignore[override]
        other = _as_elem(other)
        return RingElem.make(_k.mul(self.num, other.num), self.k + other.k)

    __rmul__ = __mul__

    def conj(self) -> RingElem:
        # conj(delta) = w^7 delta, so conj(1/delta^k) = w^k / delta^k
        return _new_re(RingElem, (_wrap(_k.omega_pow(_k.conj(self.num), self.k)), self.k))

    def times_omega(self, m: int) -> RingElem:
        return _new_re(RingElem, (_wrap(_k.omega_pow(self.num, m)), self.k))

    def div_sqrt2(self) -> RingElem:
        return RingElem.make(_k.mul(self.num, OMEGA_LAMBDA), self.k + 2)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    @property
    def lde(self) -> int:
        return self.k

    def scaled(self, k: int) -> CycInt:
        """delta^k * self as a cyclotomic integer (requires k >= self.k)."""
        if k < self.k:
            raise RingError("scaling exponent below the least delta-exponent")
        return _wrap(_k.mul_delta_pow(self.num, k - self.k))

    def to_dyadic(self) -> tuple[CycInt, int]:
        """Minimal (numerator, l) with value numerator / 2^l."""
        if self.k == 0:
            return self.num, 0
        l = -(-self.k // 4)
        x = _k.mul_delta_pow(self.num, 4 * l - self.k)
        # 1/delta^{4l} = (w^{-2} lambda^{-2})^l / 2^l
        u = _k.mul(_k.omega_pow(LAMBDA_INV, 6), LAMBDA_INV)
        for _ in range(l):
            x = _k.mul(x, u)
        while l > 0 and all(c % 2 == 0 for c in x):
            x = tuple(c // 2 for c in x)
            l -= 1
        return _wrap(x), l

    def to_complex(self) -> complex:
        num, l = self.to_dyadic()
        return num.to_complex() / (2 ** l)

    def __repr__(self) -> str:
        return f"RingElem({format_ring_elem(self)})"

    def __str__(self) -> str:
        return format_ring_elem(self)


_new_re = tuple.__new__
RingElem.ZERO = _new_re(RingElem, (ZERO, 0))  # type: ignore[attr-defined]
RingElem.ONE = _new_re(RingElem, (ONE, 0))  # type: ignore[attr-defined]
R_ZERO: RingElem = RingElem.ZERO  # type: ignore[attr-defined]
R_ONE: RingElem = RingElem.ONE  # type: ignore[attr-defined]


def _as_elem(x) -> RingElem:
    if isinstance(x, RingElem):
        return x
    if isinstance(x, int):
        return RingElem.from_int(x)
    if isinstance(x, tuple) and len(x) == 4:
        return RingElem.from_cycint(x)
    raise TypeError(f"cannot treat {x!r} as a ring element")


def lde(x) -> int:
    """Least delta-exponent of an element, vector or matrix (entrywise max)."""
    if isinstance(x, RingElem):
        return x.k
    if isinstance(x, CycInt):
        return 0
    if hasattr(x, "rows"):
        x = [e for row in x.rows for e in row]
    best = 0
    for e in x:
        v = lde(e)
        if v > best:
            best = v
    return best


# Residue rings Z[w]/(delta^p), with the representative sets quoted from the source.
_D = DELTA
RESIDUE_REPS: dict[int, tuple[CycInt, ...]] = {
    1: (ZERO, ONE),
    2: (ZERO, ONE, _D, _D + 1),
    3: (
        ONE,
        OMEGA,
        CycInt.omega(2),
        CycInt.omega(3),
        ZERO,
        ONE + OMEGA,
        ONE + CycInt.omega(2),
        ONE + CycInt.omega(3),
    ),
}


@dataclass(frozen=True)
class Residue:
    """Class of a cyclotomic integer modulo delta^p.

    ``modulus_power`` 1..3 use the representative sets above; 4 stands for
    the ideal (2) = (delta^4), with representatives having 0/1 coefficients.
    """

    modulus_power: int
    rep: CycInt

    def __str__(self) -> str:
        return f"{self.rep} mod delta^{self.modulus_power}"


def residue(x: CycInt, p: int) -> Residue:
    x = _coerce(x)
    if p == 1:
        return Residue(1, ONE if _k.parity(x) else ZERO)
    if p == 4:
        return Residue(4, CycInt(*(c & 1 for c in x)))
    if p not in RESIDUE_REPS:
        raise RingError(f"unsupported residue modulus delta^{p}")
    for r in RESIDUE_REPS[p]:
        if delta_divides_pow(_k.sub(x, r), p):
            return Residue(p, r)
    raise AssertionError("representative set is incomplete")  # pragma: no cover


def omega_exponent_mod_delta3(x: CycInt) -> int:
    """The m in 0..3 with x = w^m (mod delta^3); needs x = 1 (mod delta)."""
    x = _coerce(x)
    if not _k.parity(x):
        raise RingError("precondition violated: x is divisible by delta")
    for m in range(4):
        if delta_divides_pow(_k.sub(x, _k.omega_pow((0, 0, 0, 1), m)), 3):
            return m
    raise AssertionError("no matching power of omega")  # pragma: no cover


def check_add_conj(x: CycInt) -> bool:
    """Whether sqrt2 divides x + conj(x); sqrt2 and delta^2 are associates."""
    x = _coerce(x)
    return delta_divides_pow(_k.add(x, _k.conj(x)), 2)


def residue_pattern_sum(x: CycInt, y: CycInt, z: CycInt, w: CycInt) -> Residue:
    """Mod-2 class of the Hermitian square sum of four values.

    Their residues mod delta^2 must be 0, 1, delta, delta+1 in some order.
    """
    vals = [_coerce(v) for v in (x, y, z, w)]
    got = sorted(residue(v, 2).rep for v in vals)
    if got != sorted(RESIDUE_REPS[2]):
        raise RingError("precondition violated: residues are not {0, 1, delta, delta+1}")
    total = (0, 0, 0, 0)
    for v in vals:
        total = _k.add(total, _k.mul(_k.conj(v), v))
    return residue(_wrap(total), 4)


_ENTRY_RE = re.compile(
    r"^\s*(?:\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)|(-?\d+))"
    r"\s*(?:/\s*(\d+)(?:\s*\^\s*(\d+))?)?\s*$"
)


def parse_ring_elem(text: str) -> RingElem:
    """Parse ``(a,b,c,d)/2^l``; a bare integer and a missing ``/2^l`` are allowed."""
    m = _ENTRY_RE.match(text)
    if not m:
        raise RingError(f"cannot parse ring element {text.strip()!r}")
    if m.group(5) is not None:
        num = (0, 0, 0, int(m.group(5)))
    else:
        num = tuple(int(m.group(i)) for i in range(1, 5))
    base, exp = m.group(6), m.group(7)
    l = 0
    if base is not None:
        base_i = int(base)
        e = int(exp) if exp is not None else 1
        if base_i == 2:
            l = e
        elif base_i == 1:
            l = 0
        else:
            # accept any power of two written out, reject the rest
            if base_i & (base_i - 1) or base_i == 0:
                raise RingError(f"entry not in D[omega]: {text.strip()}")
            l = (base_i.bit_length() - 1) * e
    return RingElem.from_dyadic(num, l)


def format_ring_elem(x: RingElem) -> str:
    num, l = x.to_dyadic()
    body = f"({num.a},{num.b},{num.c},{num.d})"
    return body if l == 0 else f"{body}/2^{l}"


def cyc_from_iter(it: Iterable[int]) -> CycInt:
    return _wrap(tuple(it))
