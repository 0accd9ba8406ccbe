"""Pure-Python kernels for arithmetic in Z[omega].

An element ``a*w^3 + b*w^2 + c*w + d`` is a 4-tuple ``(a, b, c, d)`` of
Python ints.  Every function here is total on such tuples and returns a new
tuple; the compiled twin in ``_kernels.pyx`` exposes the same names.
"""

from __future__ import annotations

Quad = tuple  # (a, b, c, d)

BACKEND = "python"


def add(x: Quad, y: Quad) -> Quad:
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])


def sub(x: Quad, y: Quad) -> Quad:
    return (x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3])


def neg(x: Quad) -> Quad:
    return (-x[0], -x[1], -x[2], -x[3])


def mul(x: Quad, y: Quad) -> Quad:
    a3, a2, a1, a0 = x
    b3, b2, b1, b0 = y
    return (
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
    )


def scale(x: Quad, n: int) -> Quad:
    return (x[0] * n, x[1] * n, x[2] * n, x[3] * n)


def omega_pow(x: Quad, m: int) -> Quad:
    """Multiply by w^m; each factor of w is a signed rotation of the basis."""
    a, b, c, d = x
    m &= 7
    if m >= 4:
        a, b, c, d = -a, -b, -c, -d
        m -= 4
    for _ in range(m):
        a, b, c, d = b, c, d, -a
    return (a, b, c, d)


def conj(x: Quad) -> Quad:
    return (-x[2], -x[1], -x[0], x[3])


def parity(x: Quad) -> int:
    """Residue modulo delta: 0 or 1 (w = 1 mod delta)."""
    return (x[0] + x[1] + x[2] + x[3]) & 1


def div_delta(x: Quad):
    """Exact quotient x / (1 + w), or None when delta does not divide x.

    Uses delta * (1+w^3)(1+w^5)(1+w^7) = 2; the conjugate product is
    1 - w + w^2 - w^3.
    """
    a, b, c, d = x
    if (a + b + c + d) & 1:
        return None
    return (
        (a + c - b - d) >> 1,
        (a + b - c + d) >> 1,
        (b + c - a - d) >> 1,
        (a - b + c + d) >> 1,
    )


def reduce(x: Quad, k: int):
    """Strip delta factors from x/delta^k until k = 0 or delta no longer divides."""
    a, b, c, d = x
    while k > 0:
        if (a + b + c + d) & 1:
            break
        a, b, c, d = (
            (a + c - b - d) >> 1,
            (a + b - c + d) >> 1,
            (b + c - a - d) >> 1,
            (a - b + c + d) >> 1,
        )
        k -= 1
    if a == 0 and b == 0 and c == 0 and d == 0:
        k = 0
    return (a, b, c, d), k


def mul_delta_pow(x: Quad, e: int) -> Quad:
    """Multiply x by delta^e."""
    a, b, c, d = x
    for _ in range(e):
        # (a w^3 + b w^2 + c w + d)(1 + w)
        a, b, c, d = a + b, b + c, c + d, d - a
    return (a, b, c, d)
