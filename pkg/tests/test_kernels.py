from __future__ import annotations

import importlib

import pytest
from hypothesis import given, strategies as st

from dunitary import _kernels_py as py
from dunitary._backend import BACKEND

try:
    cy = importlib.import_module("dunitary._kernels")
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled kernels not built")
small = st.tuples(*(st.integers(-(2**28), 2**28) for _ in range(4)))
huge = st.tuples(*(st.integers(-(2**80), 2**80) for _ in range(4)))
either = st.one_of(small, huge)


def test_backend_named():
    assert BACKEND in ("python", "cython")


@needs_ext
@given(either, either)
def test_binary_ops_agree(x, y):
    for name in ("add", "sub", "mul"):
        assert tuple(getattr(cy, name)(x, y)) == tuple(getattr(py, name)(x, y))


@needs_ext
@given(either, st.integers(0, 30), st.integers(-9, 9))
def test_unary_ops_agree(x, k, m):
    assert tuple(cy.neg(x)) == tuple(py.neg(x))
    assert tuple(cy.conj(x)) == tuple(py.conj(x))
    assert cy.parity(x) == py.parity(x)
    assert cy.div_delta(x) == py.div_delta(x)
    assert cy.reduce(x, k) == py.reduce(x, k)
    assert tuple(cy.mul_delta_pow(x, k)) == tuple(py.mul_delta_pow(x, k))
    assert tuple(cy.omega_pow(x, m)) == tuple(py.omega_pow(x, m))


@given(small)
def test_mul_delta_then_reduce(x):
    y = py.mul_delta_pow(x, 5)
    q, k = py.reduce(y, 5)
    if any(x):
        assert k <= 5
        assert tuple(py.mul_delta_pow(q, 5 - k)) == tuple(x) or k < 5
    else:
        assert k == 0


def test_pure_env_forces_python(monkeypatch):
    import dunitary._backend as b

    monkeypatch.setenv("DUNITARY_PURE", "1")
    mod = importlib.reload(b)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("DUNITARY_PURE")
        importlib.reload(b)
