import random

from hypothesis import given, strategies as st

from stated_skein.qcoeff import ONE, dot_equal, vpow
from stated_skein.qtorus import (
    SkewForm, TorusElement, leading_term, sublattice_membership, weyl, weyl_monomial,
)

A, B, C = 0, 1, 2
FORM = SkewForm.cyclic(("y_a", "y_b", "y_c"))


def gen(i, e=1):
    return TorusElement.generator(FORM, i, e)


def test_cyclic_relations():
    # y_a y_b = q y_b y_a and cyclically
    for x, y in [(A, B), (B, C), (C, A)]:
        assert gen(x) * gen(y) == (gen(y) * gen(x)).scale(vpow(2))


def test_product_example():
    x = gen(B) * gen(A)
    assert x.terms == {(1, 1, 0): vpow(-2)}


def test_identity_and_inverse():
    assert gen(A) * TorusElement.one(FORM) == gen(A)
    assert gen(A) * gen(A, -1) == TorusElement.one(FORM)


def test_weyl_examples():
    cb = weyl(FORM, [(C, 1), (B, 1)])
    assert cb.terms == {(0, 1, 1): vpow(-1)}
    assert cb == (gen(C) * gen(B)).scale(vpow(1))
    assert weyl(FORM, [(C, 1), (B, -1)]) == (gen(C) * gen(B, -1)).scale(vpow(-1))
    assert weyl(FORM, [(A, 1)]) == gen(A)


def test_opposite_form():
    op = FORM.opposite()
    ya, yb = TorusElement.generator(op, A), TorusElement.generator(op, B)
    assert yb * ya == (ya * yb).scale(vpow(2))


def test_leading_term_example():
    form = SkewForm([[0] * 3] * 3)
    x = TorusElement(form, {(2, 0, 1): vpow(1), (1, 5, 0): ONE})
    assert leading_term(x) == ((2, 0, 1), vpow(1))


def test_sublattice_examples():
    form = SkewForm([[0] * 6] * 6)
    gens = [(1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)]
    assert sublattice_membership(TorusElement(form), gens)
    assert not sublattice_membership(TorusElement.monomial(form, (1, 1, 0, 0, 0, 0)), gens)
    assert sublattice_membership(TorusElement.monomial(form, (1, 0, 0, 1, 0, 0)), gens)
    assert sublattice_membership(TorusElement.monomial(form, (2, -1, 0, 2, -1, 0)), gens)


exps = st.tuples(*[st.integers(-2, 2)] * 3)


@given(exps, exps)
def test_weyl_monomials_q_commute(k, l):
    # [xy] = [yx] for Weyl monomials
    x = weyl_monomial(FORM, k)
    y = weyl_monomial(FORM, l)
    s = sum(k[i] * FORM.lam[i][j] * l[j] for i in range(3) for j in range(3))
    assert x * y == (y * x).scale(vpow(2 * s))
    assert set((x * y).terms) == {tuple(a + b for a, b in zip(k, l))}


@given(st.lists(st.sampled_from([(A, 1), (A, -1), (B, 1), (B, -1), (C, 1), (C, -1)]), min_size=2, max_size=2))
def test_weyl_reversal(factors):
    assert weyl(FORM, factors) == weyl(FORM, list(reversed(factors)))


def _random_element(rng):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        k = tuple(rng.randint(-2, 2) for _ in range(3))
        terms[k] = vpow(rng.randint(-3, 3), rng.choice([-2, -1, 1, 2]))
    return TorusElement(FORM, terms)


def test_leading_term_multiplicative():
    rng = random.Random(7)
    for _ in range(100):
        a, b = _random_element(rng), _random_element(rng)
        if a.is_zero() or b.is_zero():
            continue
        (ka, ca), (kb, cb) = leading_term(a), leading_term(b)
        k, c = leading_term(a * b)
        assert k == tuple(x + y for x, y in zip(ka, kb))
        assert dot_equal(c, ca * cb)


def test_associative():
    rng = random.Random(3)
    for _ in range(50):
        a, b, c = (_random_element(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_antisymmetry_enforced():
    import pytest
    with pytest.raises(ValueError):
        SkewForm([[0, 1], [1, 0]])
