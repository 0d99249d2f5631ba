import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import state_sum, transfer_trace
from stated_skein import qtrace as qt
from stated_skein import surface as sf
from stated_skein.qcoeff import ONE, dot_equal, vpow
from stated_skein.qtorus import TorusElement, leading_term, weyl, weyl_monomial
from stated_skein.skein_presented import (
    SkeinElement, all_generators, mul, normal_form, normal_words, parse_word, tau,
)
from stated_skein.surface import Component, Tangle

TORUS = sf.punctured_torus()
BIGON2 = sf.punctured_bigon()
TRI = sf.ideal_triangle()
FORM = qt.triangle_form()
A, B, C = 0, 1, 2
LOOP10 = Component("loop", ((0, 0, 1), (1, 1, 0)))


def word(text):
    return SkeinElement.word(parse_word(text))


def test_phi_generators():
    assert qt.phi(word("a(+,+)")) == weyl(FORM, [(C, 1), (B, 1)])
    assert qt.phi(word("a(+,+)")) == weyl_monomial(FORM, (0, 1, 1))
    assert qt.phi(word("a(-,+)")).is_zero()
    assert qt.phi(word("a(+,-)")) == weyl(FORM, [(C, 1), (B, -1)])
    assert qt.phi(word("b(-,-)")) == weyl(FORM, [(A, -1), (C, -1)])


def test_phi_tau_equivariant():
    for n in range(3):
        for w in normal_words(n):
            x = SkeinElement.word(w)
            assert qt.phi(tau(x)) == qt.rotate(qt.phi(x))


def test_phi_respects_relations():
    gens = all_generators()
    for x in gens:
        for y in gens:
            lhs = qt.phi(SkeinElement.word((x, y)))
            assert lhs == qt.phi(normal_form((x, y)))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.sampled_from(all_generators()), max_size=4).map(tuple))
def test_phi_of_any_word_matches_normal_form(w):
    assert qt.phi(SkeinElement.word(w)) == qt.phi(normal_form(w))


def test_kappa_examples():
    assert qt.kappa(TORUS, Tangle()) == TorusElement.one(qt.surface_form(TORUS))
    arc = Tangle((Component("arc", ((0, 2, 1),), ((1, None), (1, None))),))
    assert qt.kappa(TRI, arc) == qt.phi(word("a(+,+)"))


def test_torus_loop_trace():
    x = qt.kappa(TORUS, Tangle((LOOP10,)))
    assert len(x) == 3
    cf = qt.ChekhovFock(TORUS)
    assert cf.contains(x)
    ex = cf.express(x)
    assert all(c.is_monomial() and c.terms == {0: 1} for _, c in ex)
    assert sorted(k for k, _ in ex) == [(-1, -1, 0), (-1, 1, 0), (1, 1, 0)]


def _classical(t, x):
    cf = qt.ChekhovFock(t)
    ex = cf.express(x)
    assert ex is not None
    y = {e: sympy.Symbol(f"y_{e}") for e in t.edges}
    total = 0
    for k, c in ex:
        term = int(c.specialize(1))
        for e, m in zip(t.edges, k):
            term *= y[e] ** m
        total += term
    return sympy.expand(total)


def test_classical_oracles_agree_on_simple_loops():
    for passes in [((0, 0, 1), (1, 1, 0)), ((0, 1, 2), (1, 2, 1)), ((0, 2, 0), (1, 0, 2))]:
        x = qt.kappa(TORUS, Tangle((Component("loop", passes),)))
        want = transfer_trace(TORUS.faces, passes)
        assert sympy.simplify(_classical(TORUS, x) - want) == 0
        assert sympy.simplify(state_sum(TORUS.faces, [list(passes)]) - want) == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_random_multicurves_match_state_sum(seed):
    rng = random.Random(seed)
    counts = {e: rng.randint(0, 2) for e in TORUS.edges}
    try:
        comps = sf.normal_curves(TORUS, counts)
    except sf.SurfaceError:
        return
    x = qt.kappa(TORUS, Tangle(tuple(comps)))
    want = state_sum(TORUS.faces, [list(c.passes) for c in comps])
    assert sympy.simplify(_classical(TORUS, x) - want) == 0


def test_trace_hat_generator():
    assert qt.trace_hat_generator(1, -1) == TorusElement.one(FORM).scale(vpow(-1))
    assert qt.trace_hat_generator(-1, 1) == TorusElement.one(FORM).scale(vpow(-5, -1))
    assert qt.trace_hat_generator(1, -1, reversed=True) == TorusElement.one(FORM).scale(vpow(1))


def test_cf_membership():
    cf = qt.ChekhovFock(TORUS)
    form = cf.form
    assert cf.contains(TorusElement(form))
    bare = TorusElement.generator(form, 0)
    assert not cf.contains(bare)
    assert cf.contains(cf.generator("e1") * cf.generator("e2", -1))


def test_leading_examples():
    loop = Tangle((LOOP10,))
    assert qt.k_vector(TORUS, loop) == (1, 1, 0)
    k, c = qt.trace_leading(TORUS, loop)
    assert k == qt.ChekhovFock(TORUS).embed((1, 1, 0))
    assert qt.k_vector(TORUS, Tangle()) == (0, 0, 0)
    doubled = Tangle(tuple(sf.normal_curves(TORUS, {"e1": 2, "e2": 2, "e3": 0})))
    assert qt.k_vector(TORUS, doubled) == (2, 2, 0)
    k, c = qt.trace_leading(TORUS, doubled)
    assert k == qt.ChekhovFock(TORUS).embed((2, 2, 0))
    assert c.is_monomial()


def test_trace_leading_rejects_non_basis():
    minus = Tangle((Component("arc", ((0, 2, 0), (1, 1, 2)), ((-1, None), (1, None))),))
    with pytest.raises(sf.SurfaceError):
        qt.trace_leading(BIGON2, minus)


def test_omega():
    p = Tangle((Component("arc", ((0, 2, 0), (1, 1, 2)), ((0, None), (0, None))),))
    o = qt.omega(BIGON2, p)
    assert [s for s, _ in o.components[0].endpoints] == [1, 1]
    two = sf.stack(BIGON2, o, o)
    assert all(s == 1 for c in two.components for s, _ in c.endpoints)
    with pytest.raises(sf.SurfaceError):
        qt.omega(BIGON2, o)


def test_kappa_omega_injective_on_small_basis():
    seen = {}
    for n1 in range(3):
        for n2 in range(3):
            for nx in range(3):
                counts = {"e1": n1, "e2": n2, "x": nx, "y": nx}
                if n1 + n2 + 2 * nx > 4:
                    continue
                try:
                    comps = sf.normal_curves(BIGON2, counts)
                except sf.SurfaceError:
                    continue
                comps = tuple(c if c.kind == "loop" else c.__class__(c.kind, c.passes, ((0, None), (0, None)))
                              for c in comps)
                d = qt.omega(BIGON2, Tangle(comps))
                if not qt.is_basis_tangle(BIGON2, d):
                    continue
                k, _ = qt.trace_leading(BIGON2, d)
                assert k not in seen
                seen[k] = counts
    assert len(seen) >= 4


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_kappa_multiplicative(seed):
    rng = random.Random(seed)
    t = rng.choice([TORUS, BIGON2])
    d1 = sf.random_tangle(t, rng, max_count=1)
    d2 = sf.random_tangle(t, rng, max_count=1)
    s = sf.stack(t, d1, d2)
    assert qt.kappa(t, s) == qt.kappa(t, d1) * qt.kappa(t, d2)
