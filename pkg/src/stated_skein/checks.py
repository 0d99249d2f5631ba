"""Verification suites shared by the command line and the test-suite.

Each suite takes a seed and returns ``(ok, message)``.  Every random choice
goes through ``random.Random(seed)``, so output is reproducible.
"""
from __future__ import annotations

import random
from itertools import product
from typing import Callable, Dict, List, Tuple

import sympy

from . import disk_eval as de
from . import qtrace as qt
from . import surface as sf
from .qcoeff import Laurent, ONE, vpow
from .skein_presented import (
    TRIANGLE, Rewriter, SkeinElement, _pair_rules, all_generators, chi, mul,
    normal_form, normal_words,
)

Suite = Callable[[int], Tuple[bool, str]]


def _words_upto(n: int):
    gens = all_generators(TRIANGLE)
    for length in range(1, n + 1):
        yield from product(gens, repeat=length)


def random_element(rng: random.Random, max_degree: int = 2, max_terms: int = 2) -> SkeinElement:
    """Random nonzero element: a few words of degree <= max_degree, with
    coefficients of at most two monomials."""
    gens = all_generators(TRIANGLE)
    while True:
        out = SkeinElement(TRIANGLE)
        for _ in range(rng.randint(1, max_terms)):
            w = tuple(rng.choice(gens) for _ in range(rng.randint(0, max_degree)))
            c = Laurent()
            for _ in range(rng.randint(1, 2)):
                c = c + vpow(rng.randint(-4, 4), rng.choice((-2, -1, 1, 2)))
            out = out + normal_form(w).scale(c)
        if not out.is_zero():
            return out


# --------------------------------------------------------------- suites

def suite_phi_relations(seed: int = 0) -> Tuple[bool, str]:
    names = {("sort", 2): "exchange", ("sort", 1): "exchange (inverted)",
             ("state", 0): "equal letters", ("state", 1): "successor", ("state", 2): "predecessor"}
    gens = all_generators(TRIANGLE)
    count = 0
    families: Dict[str, int] = {}
    for x in gens:
        for y in gens:
            for kind, rw in _pair_rules(x, y, TRIANGLE):
                lhs = qt.phi_word((x, y), qt.triangle_form())
                rhs = qt.TorusElement(qt.triangle_form())
                for c, w in rw:
                    rhs = rhs + qt.phi_word(w, qt.triangle_form()).scale(c)
                if lhs != rhs:
                    return False, f"relation fails on {x} {y}"
                count += 1
                fam = names[(kind, (y[0] - x[0]) % 3)]
                families[fam] = families.get(fam, 0) + 1
    for w in _words_upto(3):
        if qt.phi(SkeinElement.word(w)) != qt.phi(normal_form(w)):
            return False, f"phi does not respect the normal form of {w}"
    fam = ", ".join(f"{k}: {v}" for k, v in sorted(families.items()))
    return True, f"all {count} relation instances hold ({fam}); phi respects 1884 normal forms"


def suite_confluence(seed: int = 0) -> Tuple[bool, str]:
    a = Rewriter(TRIANGLE, "leftmost")
    b = Rewriter(TRIANGLE, "random", seed=seed)
    total = bad = 0
    for w in _words_upto(3):
        total += 1
        if a.normal_form(w) != b.normal_form(w):
            bad += 1
    rng = random.Random(seed)
    gens = all_generators(TRIANGLE)
    rbad = 0
    for _ in range(1000):
        w = tuple(rng.choice(gens) for _ in range(rng.randint(1, 5)))
        if a.normal_form(w) != b.normal_form(w):
            rbad += 1
    ok = bad == 0 and rbad == 0
    return ok, (
        f"{total - bad}/{total} words of length <= 3 confluent; "
        f"{1000 - rbad}/1000 random words of length <= 5 confluent"
    )


def suite_roundtrip(seed: int = 0) -> Tuple[bool, str]:
    total = bad = 0
    for n in range(4):
        for w in normal_words(n, TRIANGLE):
            total += 1
            got = de.eval_diagram(de.word_to_diagram(w))
            if got != SkeinElement.word(w):
                bad += 1
    return bad == 0, f"{total - bad}/{total} normal words of degree <= 3 round-trip"


def theta_word(k, states) -> tuple:
    """Stacked word alpha^k1 beta^k2 gamma^k3 carrying the edge states by height."""
    from .skein_presented import letter_edges

    le = letter_edges(TRIANGLE)
    rem = {e: list(states[e]) for e in states}
    w = []
    for L, m in enumerate(k):
        for _ in range(m):
            e1, e2 = le[L]
            w.append((L, rem[e1].pop(), rem[e2].pop()))
    return tuple(w)


def suite_theta(seed: int = 0) -> Tuple[bool, str]:
    total = bad = 0
    for k in product(range(4), repeat=3):
        n = sum(k)
        if n > 3:
            continue
        counts = {"a": k[1] + k[2], "b": k[2] + k[0], "c": k[0] + k[1]}
        for sa, sb, sc in product(*(list(product((1, -1), repeat=counts[e])) for e in "abc")):
            st = {"a": sa, "b": sb, "c": sc}
            total += 1
            got = de.eval_diagram(de.theta(k, st))
            ref = normal_form(theta_word(k, st))
            top = {w: c for w, c in got.terms.items() if len(w) == n}
            rtop = {w: c for w, c in ref.terms.items() if len(w) == n}
            if set(top) != set(rtop) or not top:
                bad += 1
                continue
            w0 = next(iter(top))
            j = top[w0].degree() - rtop[w0].degree()
            if any(top[w] != rtop[w].shift(j) for w in top):
                bad += 1
    return bad == 0, f"{total - bad}/{total} parallel diagrams have the expected leading part"


def test_surfaces():
    return [("punctured torus", sf.punctured_torus()), ("punctured bigon", sf.punctured_bigon())]


def suite_cut_order(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    lines = []
    ok = True
    for name, t in test_surfaces():
        flipped = sf.Triangulation(t.faces, t.edges, {e: "backward" for e in t.interior_edges()})
        good = 0
        for _ in range(50):
            d = sf.random_tangle(t, rng, 2)
            order = t.interior_edges()
            a = sf.decompose(t, d, order)
            b = sf.decompose(t, d, order[::-1])
            c = sf.decompose(flipped, d, order[::-1])
            good += a == b == c
        ok &= good == 50
        lines.append(f"{name}: {good}/50")
    return ok, "cut-order independence " + ", ".join(lines)


def random_stack_pair(t, rng: random.Random, max_crossings: int = 2, max_count: int = 2):
    while True:
        d1 = sf.random_tangle(t, rng, max_count)
        d2 = sf.random_tangle(t, rng, max_count)
        s = sf.stack(t, d1, d2)
        if sf.crossing_count(t, s) <= max_crossings:
            return d1, d2, s


def suite_homomorphism(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    good = 0
    crossings = 0
    surfaces = test_surfaces()
    for i in range(30):
        _, t = surfaces[i % 2]
        d1, d2, s = random_stack_pair(t, rng)
        crossings += sf.crossing_count(t, s)
        if qt.kappa(t, s) == qt.kappa(t, d1) * qt.kappa(t, d2):
            good += 1
    return good == 30, f"{good}/30 stacked pairs multiply ({crossings} in-face crossings in total)"


def classical_trace(t: sf.Triangulation, passes) -> sympy.Expr:
    """Trace of the shear-coordinate monodromy of a closed normal curve.

    Walking along the curve, a right turn in a face contributes
    [[1, 0], [1, 1]], a left turn [[1, 1], [0, 1]], and crossing edge e
    contributes diag(y_e, 1/y_e).
    """
    y = {e: sympy.Symbol(f"y_{e}") for e in t.edges}
    R = sympy.Matrix([[1, 0], [1, 1]])
    L = sympy.Matrix([[1, 1], [0, 1]])
    M = sympy.eye(2)
    for f, i, j in passes:
        M = M * (R if j == (i + 1) % 3 else L)
        e = t.label((f, j))
        M = M * sympy.diag(y[e], 1 / y[e])
    return sympy.expand(M.trace())


def kappa_at_one(t: sf.Triangulation, d: sf.Tangle) -> sympy.Expr:
    cf = qt.ChekhovFock(t)
    x = qt.kappa(t, d)
    terms = cf.express(x)
    if terms is None:
        raise ValueError("trace is not in the Chekhov-Fock algebra")
    y = [sympy.Symbol(f"y_{e}") for e in t.edges]
    total = sympy.Integer(0)
    for k, c in terms:
        mono = sympy.Integer(1)
        for s, e in zip(y, k):
            mono *= s ** e
        total += int(c.specialize(1)) * mono
    return sympy.expand(total)


def suite_torus_trace(seed: int = 0) -> Tuple[bool, str]:
    t = sf.punctured_torus()
    (c,) = sf.normal_curves(t, {"e1": 1, "e2": 1, "e3": 0})
    d = sf.Tangle((c,))
    x = qt.kappa(t, d)
    cf = qt.ChekhovFock(t)
    units = all(v.is_monomial() and abs(next(iter(v.terms.values()))) == 1 for v in x.terms.values())
    member = cf.contains(x)
    oracle = classical_trace(t, c.passes)
    match = sympy.simplify(kappa_at_one(t, d) - oracle) == 0
    ok = len(x) == 3 and units and member and match
    return ok, (
        f"(1,0) curve: {len(x)} monomials, unit coefficients {units}, "
        f"in Chekhov-Fock {member}, classical trace {oracle} matches {match}"
    )


def random_basis_tangle(t, rng: random.Random, max_count: int = 2) -> sf.Tangle:
    """Simple, all-plus, positively ordered tangle."""
    from dataclasses import replace

    d = sf.random_tangle(t, rng, max_count)
    d = qt._strip_heights(d)
    comps = tuple(replace(c, endpoints=tuple((1, None) for _ in c.endpoints)) for c in d.components)
    return sf.default_heights(t, sf.Tangle(comps))


def suite_leading(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    good = 0
    seen: Dict[Tuple[str, tuple], tuple] = {}
    clash = 0
    surfaces = test_surfaces()
    for i in range(50):
        name, t = surfaces[i % 2]
        d = random_basis_tangle(t, rng, 2)
        cf = qt.ChekhovFock(t)
        k = sf.edge_counts(t, d)
        exp, coef = qt.trace_leading(t, d)
        if exp == cf.embed(k) and coef.is_monomial() and abs(next(iter(coef.terms.values()))) == 1:
            good += 1
        prev = seen.setdefault((name, k), exp)
        if prev != exp:
            clash += 1
    distinct = len(seen)
    ok = good == 50 and clash == 0
    return ok, (
        f"{good}/50 leading exponents equal y^k_D with unit coefficient; "
        f"{distinct} distinct k_D give distinct leading exponents"
    )


def suite_domain(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    good = 0
    for _ in range(200):
        a, b = random_element(rng), random_element(rng)
        good += not mul(a, b).is_zero()
    return good == 200, f"{good}/200 products of nonzero elements are nonzero"


def suite_reflection(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    good = 0
    for _ in range(100):
        a, b = random_element(rng), random_element(rng)
        good += chi(chi(a)) == a and chi(mul(a, b)) == mul(chi(b), chi(a))
    return good == 100, f"{good}/100 pairs satisfy chi^2 = id and chi(xy) = chi(y)chi(x)"


def suite_classical(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    good = 0
    for _ in range(50):
        a, b = random_element(rng), random_element(rng)
        comm = mul(a, b) - mul(b, a)
        good += all(c.specialize(1) == 0 for c in comm.terms.values())
    x = SkeinElement.word(((0, -1, 1),))
    y = SkeinElement.word(((0, 1, 1),))
    witness = mul(x, y) - mul(y, x)
    ok = good == 50 and not witness.is_zero()
    return ok, (
        f"{good}/50 commutators vanish at v = 1; "
        f"[a(-,+), a(+,+)] is {'nonzero' if not witness.is_zero() else 'zero'} for generic v"
    )


def suite_strategies(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    good = 0
    for _ in range(500):
        d = de.random_diagram(rng, TRIANGLE, components=3, max_crossings=2)
        good += de.eval_diagram(d, "diagram") == de.eval_diagram(d, "stack")
    return good == 500, f"{good}/500 random diagrams agree under both evaluation strategies"


SUITES: Dict[str, Suite] = {
    "phi-relations": suite_phi_relations,
    "confluence": suite_confluence,
    "roundtrip": suite_roundtrip,
    "theta": suite_theta,
    "cut-order": suite_cut_order,
    "homomorphism": suite_homomorphism,
    "torus-trace": suite_torus_trace,
    "leading": suite_leading,
    "domain": suite_domain,
    "reflection": suite_reflection,
    "classical": suite_classical,
    "strategies": suite_strategies,
}
