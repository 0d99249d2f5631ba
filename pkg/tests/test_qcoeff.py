from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stated_skein.qcoeff import (
    Laurent, ONE, ZERO, add, bar, dot_equal, mul, parse, qpow, render, specialize, vpow,
)

laurents = st.dictionaries(st.integers(-8, 8), st.integers(-5, 5), max_size=4).map(Laurent)


def test_add_examples():
    assert add(vpow(2), vpow(-2)) == Laurent({2: 1, -2: 1})
    assert add(vpow(3, 7), ZERO) == vpow(3, 7)
    assert (vpow(1) - vpow(1)).terms == {}


def test_mul_examples():
    assert mul(vpow(2) + vpow(-2), vpow(2)) == vpow(4) + ONE
    loop = -vpow(4) - vpow(-4)
    assert mul(loop, loop) == Laurent({8: 1, 0: 2, -8: 1})
    assert mul(vpow(5, 3), ONE) == vpow(5, 3)


def test_bar_and_dot_equal():
    assert bar(Laurent({3: 1, -1: -2})) == Laurent({-3: 1, 1: -2})
    assert bar(ONE) == ONE
    assert dot_equal(vpow(3), vpow(-1))
    assert not dot_equal(vpow(1) + ONE, vpow(1))
    assert dot_equal(ZERO, ZERO)
    assert not dot_equal(vpow(2, 2), vpow(2))


def test_specialize():
    assert specialize(vpow(2) + vpow(-2), 1) == 2
    assert specialize(-vpow(4) - vpow(-4), 1) == -2
    assert specialize(vpow(1), -1) == -1
    assert specialize(vpow(-1), Fraction(1, 2)) == 2


def test_q_is_v_squared():
    assert qpow(1) == vpow(2)
    assert render(qpow(1), "q") == "q"
    assert render(vpow(-1), "q") == "q^{-1/2}"


@given(laurents)
def test_bar_is_involution(x):
    assert bar(bar(x)) == x


@given(laurents, laurents)
def test_bar_is_multiplicative(x, y):
    assert bar(x * y) == bar(x) * bar(y)


@given(laurents, laurents, laurents)
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(laurents)
def test_render_parse_roundtrip(x):
    assert parse(render(x)) == x
    assert parse(render(x, "q")) == x


@given(laurents, st.integers(-3, 3).filter(lambda n: n != 0))
def test_specialize_is_ring_map(x, v0):
    y = x * x + x
    assert specialize(y, v0) == specialize(x, v0) ** 2 + specialize(x, v0)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse("v^^2")
