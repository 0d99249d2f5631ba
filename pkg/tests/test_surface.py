import random

import pytest
from hypothesis import given, settings, strategies as st

from stated_skein import surface as sf
from stated_skein.qcoeff import LOOP, ONE
from stated_skein.skein_presented import parse_word
from stated_skein.surface import Component, Tangle

TORUS = sf.punctured_torus()
BIGON2 = sf.punctured_bigon()
LOOP10 = Component("loop", ((0, 0, 1), (1, 1, 0)))  # crosses e1, e2 once


def test_validate_examples():
    assert TORUS.validate().text() == "valid, 0 boundary edges, 1 puncture, χ=-1"
    rep = sf.ideal_triangle().validate()
    assert rep.text().startswith("valid, 3 boundary edges")
    folded = sf.Triangulation([("e1", "e1", "e2")])
    assert folded.validate().boundary_edges == ("e2",)
    with pytest.raises(sf.SurfaceError):
        sf.Triangulation([("e1", "e2", "e3"), ("e1", "e4", "e5"), ("e1", "e6", "e7")])
    with pytest.raises(sf.SurfaceError):
        sf.Triangulation([("e1", "e2")])


def test_euler_characteristic():
    assert TORUS.euler_characteristic() == -1
    assert BIGON2.euler_characteristic() == 0
    assert sf.ideal_triangle().euler_characteristic() == 1


def test_serialization_roundtrip():
    assert sf.Triangulation.from_dict(TORUS.to_dict()) == TORUS
    d = sf.default_heights(TORUS, Tangle((LOOP10,)))
    assert Tangle.from_dict(d.to_dict()) == d
    arc = Tangle((Component("arc", ((0, 2, 1),), ((1, 0), (-1, 0))),))
    assert Tangle.from_dict(arc.to_dict()) == arc


def test_cut_lift_counts():
    _, lifts = sf.cut(TORUS, Tangle(), "e1")
    assert len(lifts) == 1
    _, lifts = sf.cut(TORUS, Tangle((LOOP10,)), "e1")
    assert len(lifts) == 2
    states = sorted(tuple(s for c in d.components for s, _ in c.endpoints) for _, d in lifts)
    assert states == [(-1, -1), (1, 1)]
    two = sf.stack(TORUS, Tangle((LOOP10,)), Tangle((LOOP10,)))
    _, lifts = sf.cut(TORUS, two, "e1")
    assert len(lifts) == 4
    with pytest.raises(sf.SurfaceError):
        sf.cut(BIGON2, Tangle(), "x")


def test_decompose_examples():
    x = sf.decompose(TORUS, Tangle())
    assert x.terms == {((), ()): ONE}
    # an arc from x to y through e1 meets one interior edge once
    arc = Tangle((Component("arc", ((0, 2, 0), (1, 1, 2)), ((1, None), (1, None))),))
    x = sf.decompose(BIGON2, arc)
    assert len(x) == 2
    assert all(len(w0) == 1 and len(w1) == 1 for w0, w1 in x.terms)


def test_torus_loop_decomposes_into_four_terms():
    x = sf.decompose(TORUS, Tangle((LOOP10,)))
    g = {s: parse_word(f"g({s[0]},{s[1]})") for s in ("++", "+-", "-+", "--")}
    assert x.terms == {(g[s], g[s]): ONE for s in g}


def test_stack_examples():
    d = sf.default_heights(TORUS, Tangle((LOOP10,)))
    assert sf.stack(TORUS, d, Tangle()) == d
    assert sf.crossing_count(TORUS, sf.stack(TORUS, d, d)) == 0
    other = Tangle((Component("loop", ((0, 1, 2), (1, 2, 1))),))
    assert sf.crossing_count(TORUS, sf.stack(TORUS, d, other)) == 1


def test_straighten_examples():
    # the (1,0) loop with a detour across e3 and back
    bumpy = Tangle((Component("loop", ((0, 0, 2), (1, 2, 2), (0, 2, 1), (1, 1, 0))),))
    assert not sf.is_normal_tangle(bumpy)
    c, flat = sf.straighten(TORUS, bumpy)
    assert c == ONE and flat.components[0].passes == ((0, 0, 1), (1, 1, 0))
    with pytest.raises(sf.NotNormalError):
        sf.decompose(TORUS, bumpy)
    tiny = Tangle((Component("loop", ((0, 2, 2), (1, 2, 2))),))
    c, flat = sf.straighten(TORUS, tiny)
    assert c == LOOP and flat.components == ()
    d = Tangle((LOOP10,))
    assert sf.straighten(TORUS, d) == (ONE, d)


def test_trivial_loops_scale():
    x = sf.decompose(TORUS, Tangle((LOOP10,), trivial_loops=1))
    y = sf.decompose(TORUS, Tangle((LOOP10,)))
    assert x == y.scale(LOOP)


def test_normal_curves():
    comps = sf.normal_curves(TORUS, {"e1": 1, "e2": 1, "e3": 0})
    assert len(comps) == 1 and comps[0].kind == "loop"
    comps = sf.normal_curves(TORUS, {"e1": 2, "e2": 2, "e3": 0})
    assert len(comps) == 2
    with pytest.raises(sf.SurfaceError):
        sf.normal_curves(TORUS, {"e1": 1, "e2": 0, "e3": 0})


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["torus", "bigon"]))
def test_cut_order_independence(seed, which):
    t = TORUS if which == "torus" else BIGON2
    d = sf.random_tangle(t, random.Random(seed), max_count=2)
    order = t.interior_edges()
    assert sf.decompose(t, d, order) == sf.decompose(t, d, list(reversed(order)))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_orientation_independence(seed):
    d = sf.random_tangle(TORUS, random.Random(seed), max_count=2)
    flipped = sf.punctured_torus({"e1": "backward", "e2": "backward", "e3": "backward"})
    assert sf.decompose(TORUS, d) == sf.decompose(flipped, d)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_decompose_multiplicative(seed):
    rng = random.Random(seed)
    t = rng.choice([TORUS, BIGON2])
    d1 = sf.random_tangle(t, rng, max_count=1)
    d2 = sf.random_tangle(t, rng, max_count=1)
    s = sf.stack(t, d1, d2)
    assert sf.decompose(t, s) == sf.decompose(t, d1) * sf.decompose(t, d2)
