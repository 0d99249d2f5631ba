import random

import pytest
from hypothesis import given, settings, strategies as st

from stated_skein import disk_eval as de
from stated_skein.qcoeff import LOOP, ONE, dot_equal, vpow
from stated_skein.skein_presented import (
    BIGON, TRIANGLE, SkeinElement, normal_form, normal_words, parse_word,
)


def word(text, polygon=TRIANGLE):
    return SkeinElement.word(parse_word(text, polygon), polygon)


def empty(c, polygon=TRIANGLE):
    return SkeinElement.one(polygon).scale(c)


def test_single_chord():
    d = de.chord_diagram(TRIANGLE, [("b", 0, -1), ("c", 0, 1)], [(0, 1)])
    assert de.eval_diagram(d) == word("a(+,-)")


def test_trivial_loop():
    d = de.chord_diagram(TRIANGLE, [], [], loops=1)
    assert de.eval_diagram(d) == empty(LOOP)
    assert LOOP == -vpow(4) - vpow(-4)


def test_returning_arcs():
    # positive pair (later point higher), higher state +
    d = de.chord_diagram(TRIANGLE, [("a", 0, -1), ("a", 1, 1)], [(0, 1)])
    assert de.eval_diagram(d) == empty(vpow(-1))
    # same states, reversed heights
    d = de.chord_diagram(TRIANGLE, [("a", 1, -1), ("a", 0, 1)], [(0, 1)])
    assert de.eval_diagram(d) == empty(vpow(1))
    d = de.chord_diagram(TRIANGLE, [("a", 0, 1), ("a", 1, 1)], [(0, 1)])
    assert de.eval_diagram(d).is_zero()


def test_crossing_in_bigon():
    pts = [("a", 0, 1), ("a", 1, 1), ("b", 0, 1), ("b", 1, 1)]
    d = de.chord_diagram(BIGON, pts, [(0, 2), (1, 3)])
    assert d.crossings == 1
    x = de.eval_diagram(d)
    assert list(x.terms) == [parse_word("a(+,+) a(+,+)", BIGON)]
    assert dot_equal(x.terms[parse_word("a(+,+) a(+,+)", BIGON)], vpow(2))


def test_kinks():
    d = de.chord_diagram(TRIANGLE, [("b", 0, 1), ("c", 0, 1)], [(0, 1)])
    base = de.eval_diagram(d)
    for sign in (1, -1):
        assert de.eval_diagram(de.add_kink(d, 0, sign)) == base.scale(vpow(6 * sign, -1))


def test_word_to_diagram():
    d = de.word_to_diagram(parse_word("a(+,+)"))
    assert len(d.points) == 2 and d.crossings == 0
    d = de.word_to_diagram(parse_word("a(+,+) a(-,-)"))
    assert len(d.points) == 4 and d.crossings == 0
    with pytest.raises(ValueError):
        de.word_to_diagram(parse_word("b(+,+) a(+,+)"))


def test_roundtrip_small():
    for n in range(3):
        for w in normal_words(n):
            assert de.eval_diagram(de.word_to_diagram(w)) == SkeinElement.word(w)


def test_stacked_words_match_relations():
    rng = random.Random(5)
    gens = [(L, s, t) for L in range(3) for s in (1, -1) for t in (1, -1)]
    for _ in range(150):
        w = tuple(rng.choice(gens) for _ in range(rng.randint(1, 3)))
        assert de.eval_diagram(de.stack_diagram(w)) == normal_form(w)


def _exchange_total(d, edge, pos):
    out = SkeinElement.one(d.polygon).scale(ONE) - SkeinElement.one(d.polygon)
    for c, d2 in de.exchange_step(d, edge, pos):
        out = out + de.eval_diagram(d2).scale(c)
    return out


# (states, heights) of the two b points in ccw order -> v-exponents of the
# coefficients; the pair is positive when the later point is higher
EXCHANGE_TABLE = [
    ((1, 1), (0, 1), [2]),
    ((1, 1), (1, 0), [-2]),
    ((-1, -1), (0, 1), [2]),
    ((-1, -1), (1, 0), [-2]),
    ((1, -1), (0, 1), [4, -1]),       # - above +: order relation
    ((-1, 1), (0, 1), [-2]),          # + above -
    ((-1, 1), (1, 0), [2]),
    ((1, -1), (1, 0), [-6, None]),    # second term is v - v^-7
]


@pytest.mark.parametrize("states,heights,expected", EXCHANGE_TABLE)
def test_exchange_step_table(states, heights, expected):
    pts = [("b", heights[0], states[0]), ("b", heights[1], states[1]), ("c", 0, 1), ("c", 1, 1)]
    d = de.chord_diagram(TRIANGLE, pts, [(0, 3), (1, 2)])
    terms = de.exchange_step(d, "b", 0)
    got = [c.degree() if c.is_monomial() else None for c, _ in terms]
    assert got == expected
    if None in got:
        assert terms[1][0] == vpow(1) - vpow(-7)
    assert _exchange_total(d, "b", 0) == de.eval_diagram(d)


def test_theta_leading_part():
    d = de.theta((1, 1, 0), {"a": [1], "b": [1], "c": [1, 1]})
    x = de.eval_diagram(d)
    top = [w for w in x.terms if len(w) == 2]
    assert len(top) == 1 and x.terms[top[0]].is_monomial()


def test_invalid_diagrams():
    with pytest.raises(de.DiagramError):
        de.chord_diagram(TRIANGLE, [("b", 0, 1), ("c", 0, 1)], [(0, 0)])
    with pytest.raises(de.DiagramError):
        de.DiskDiagram(TRIANGLE, (("b", 0, 1), ("b", 0, 1)), ((("p", 0), ("p", 1)),)).validate()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([TRIANGLE, BIGON]))
def test_strategies_agree(seed, polygon):
    d = de.random_diagram(random.Random(seed), polygon, components=3, max_crossings=2)
    assert de.eval_diagram(d, "diagram") == de.eval_diagram(d, "stack")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_exchange_preserves_value(seed):
    rng = random.Random(seed)
    d = de.random_diagram(rng, TRIANGLE, components=3, max_crossings=0)
    for e in ("a", "b", "c"):
        n = sum(1 for p in d.points if p[0] == e)
        for pos in range(n - 1):
            try:
                terms = de.exchange_step(d, e, pos)
            except de.DiagramError:
                continue
            assert _exchange_total(d, e, pos) == de.eval_diagram(d)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, -1]))
def test_kink_factor(seed, sign):
    d = de.random_diagram(random.Random(seed), TRIANGLE, components=2, max_crossings=1, loop_chance=0)
    if not d.strands:
        return
    assert de.eval_diagram(de.add_kink(d, 0, sign)) == de.eval_diagram(d).scale(vpow(6 * sign, -1))
