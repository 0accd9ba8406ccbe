# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels for arithmetic in Z[omega].

Same API as ``_kernels_py``.  Coefficients that fit comfortably in a machine
word take a C ``long long`` path; anything larger falls back to Python ints,
so results are always exact.
"""

from dunitary import _kernels_py as _py

BACKEND = "cython"

cdef long long SMALL = 1 << 29


cdef inline bint _small(object x):
    cdef object v
    for v in x:
        if not (-SMALL < v < SMALL):
            return False
    return True


def add(x, y):
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])


def sub(x, y):
    return (x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3])


def neg(x):
    return (-x[0], -x[1], -x[2], -x[3])


def scale(x, n):
    return (x[0] * n, x[1] * n, x[2] * n, x[3] * n)


def mul(x, y):
    cdef long long a3, a2, a1, a0, b3, b2, b1, b0
    if not (_small(x) and _small(y)):
        return _py.mul(x, y)
    a3 = x[0]; a2 = x[1]; a1 = x[2]; a0 = x[3]
    b3 = y[0]; b2 = y[1]; b1 = y[2]; b0 = y[3]
    return (
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
    )


def omega_pow(x, int m):
    a, b, c, d = x
    m &= 7
    if m >= 4:
        a, b, c, d = -a, -b, -c, -d
        m -= 4
    if m == 1:
        return (b, c, d, -a)
    if m == 2:
        return (c, d, -a, -b)
    if m == 3:
        return (d, -a, -b, -c)
    return (a, b, c, d)


def conj(x):
    return (-x[2], -x[1], -x[0], x[3])


def parity(x):
    return (x[0] + x[1] + x[2] + x[3]) & 1


def div_delta(x):
    cdef long long a, b, c, d
    if not _small(x):
        return _py.div_delta(x)
    a = x[0]; b = x[1]; c = x[2]; d = x[3]
    if (a + b + c + d) & 1:
        return None
    return ((a + c - b - d) >> 1, (a + b - c + d) >> 1,
            (b + c - a - d) >> 1, (a - b + c + d) >> 1)


def reduce(x, int k):
    cdef long long a, b, c, d, na, nb, nc, nd
    if not _small(x):
        return _py.reduce(x, k)
    a = x[0]; b = x[1]; c = x[2]; d = x[3]
    while k > 0:
        if (a + b + c + d) & 1:
            break
        na = (a + c - b - d) >> 1
        nb = (a + b - c + d) >> 1
        nc = (b + c - a - d) >> 1
        nd = (a - b + c + d) >> 1
        a = na; b = nb; c = nc; d = nd
        k -= 1
    if a == 0 and b == 0 and c == 0 and d == 0:
        k = 0
    return (a, b, c, d), k


def mul_delta_pow(x, int e):
    cdef long long a, b, c, d, na, nb, nc, nd
    cdef int i
    if e > 24 or not _small(x):
        return _py.mul_delta_pow(x, e)
    a = x[0]; b = x[1]; c = x[2]; d = x[3]
    for i in range(e):
        na = a + b
        nb = b + c
        nc = c + d
        nd = d - a
        a = na; b = nb; c = nc; d = nd
    return (a, b, c, d)
