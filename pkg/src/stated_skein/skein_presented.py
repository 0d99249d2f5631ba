"""Presented stated skein algebras of the ideal bigon and ideal triangle.

A generator is a triple ``(letter, s1, s2)`` with letter 0, 1, 2 standing
for alpha, beta, gamma and states +1 / -1.  In the triangle alpha carries
(c-state, b-state), beta carries (a-state, c-state) and gamma carries
(b-state, a-state).  In the bigon there is only alpha, carrying
(a-state, b-state).

Words are stacked products: earlier letters sit higher on every shared edge.
A word is normal when its letters come in alpha, beta, gamma blocks and, on
every edge, the states read from top to bottom never go from - up to +.

Rewriting fires on letter inversions first (the exchange relation
beta alpha = q alpha beta + ... and its rotations) and then on state
inversions between neighbouring letters: two equal letters on either of
their edges, a letter and its successor, a letter and its predecessor.
The measure (length, letter inversions, state inversions) drops at each
step.
"""
from __future__ import annotations

import random
import re
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .qcoeff import Laurent, ONE, ZERO, render, vpow

Gen = Tuple[int, int, int]
Word = Tuple[Gen, ...]

TRIANGLE = "triangle"
BIGON = "bigon"
LETTERS = "abg"
SIGNS = (1, -1)

# edges touched by each letter, in the order of its two states
TRIANGLE_EDGES = {0: ("c", "b"), 1: ("a", "c"), 2: ("b", "a")}
BIGON_EDGES = {0: ("a", "b")}


def edges_of(algebra: str) -> Tuple[str, ...]:
    return ("a", "b", "c") if algebra == TRIANGLE else ("a", "b")


def letter_edges(algebra: str) -> dict:
    return TRIANGLE_EDGES if algebra == TRIANGLE else BIGON_EDGES


def rel_constant(eps: int, eps2: int) -> Laurent:
    """C^eps_eps2: zero on equal states, q^-1/2 on (+,-), -q^-5/2 on (-,+)."""
    if eps == eps2:
        return ZERO
    return vpow(-1) if eps == 1 else vpow(-5, -1)


Q = vpow(2)
Q2 = vpow(4)
Q_INV = vpow(-2)


def _rot(letter: int, k: int = 1) -> int:
    return (letter + k) % 3


# ---------------------------------------------------------------- elements

class SkeinElement:
    """Linear combination of normal words with Laurent coefficients."""

    __slots__ = ("algebra", "_t")

    def __init__(self, algebra: str = TRIANGLE, terms: Optional[dict] = None):
        if algebra not in (TRIANGLE, BIGON):
            raise ValueError(f"unknown algebra {algebra!r}")
        self.algebra = algebra
        self._t: Dict[Word, Laurent] = {}
        if terms:
            for w, c in terms.items():
                self._add_term(tuple(w), c if isinstance(c, Laurent) else Laurent.const(c))

    def _add_term(self, w: Word, c: Laurent) -> None:
        if not c:
            return
        s = self._t.get(w, ZERO) + c
        if s:
            self._t[w] = s
        else:
            self._t.pop(w, None)

    @classmethod
    def one(cls, algebra: str = TRIANGLE) -> "SkeinElement":
        return cls(algebra, {(): ONE})

    @classmethod
    def word(cls, w: Sequence[Gen], algebra: str = TRIANGLE) -> "SkeinElement":
        """The image of an arbitrary word, reduced to normal form."""
        return normal_form(tuple(w), algebra)

    @property
    def terms(self) -> Dict[Word, Laurent]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkeinElement):
            return NotImplemented
        return self.algebra == other.algebra and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.algebra, frozenset(self._t.items())))

    def _check(self, other: "SkeinElement") -> None:
        if self.algebra != other.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: "SkeinElement") -> "SkeinElement":
        self._check(other)
        out = SkeinElement(self.algebra)
        out._t = dict(self._t)
        for w, c in other._t.items():
            out._add_term(w, c)
        return out

    def __neg__(self) -> "SkeinElement":
        out = SkeinElement(self.algebra)
        out._t = {w: -c for w, c in self._t.items()}
        return out

    def __sub__(self, other: "SkeinElement") -> "SkeinElement":
        return self + (-other)

    def scale(self, c: Laurent) -> "SkeinElement":
        out = SkeinElement(self.algebra)
        if c:
            out._t = {w: c * x for w, x in self._t.items()}
        return out

    def __mul__(self, other) -> "SkeinElement":
        if isinstance(other, Laurent):
            return self.scale(other)
        if isinstance(other, int):
            return self.scale(Laurent.const(other))
        return mul(self, other)

    def __rmul__(self, other) -> "SkeinElement":
        if isinstance(other, (Laurent, int)):
            return self.__mul__(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"SkeinElement({self.algebra}, {format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)


# ---------------------------------------------------------------- words

def is_sorted(w: Word) -> bool:
    return all(w[i][0] <= w[i + 1][0] for i in range(len(w) - 1))


def letter_inversions(w: Word) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i][0] > w[j][0])


def edge_states(w: Word, algebra: str = TRIANGLE) -> Dict[str, List[int]]:
    """States on each edge, listed from top to bottom."""
    le = letter_edges(algebra)
    out: Dict[str, List[int]] = {e: [] for e in edges_of(algebra)}
    for letter, s1, s2 in w:
        e1, e2 = le[letter]
        out[e1].append(s1)
        out[e2].append(s2)
    return out


def nd(w: Word, algebra: str = TRIANGLE) -> int:
    """Number of (-, +) pairs with the - above the +, summed over edges."""
    total = 0
    for seq in edge_states(w, algebra).values():
        minus = 0
        for s in seq:
            if s < 0:
                minus += 1
            else:
                total += minus
    return total


def is_normal(w: Word, algebra: str = TRIANGLE) -> bool:
    return is_sorted(w) and nd(w, algebra) == 0


def normal_words(degree: int, algebra: str = TRIANGLE) -> Iterator[Word]:
    """All normal words of exactly the given length."""
    letters = range(3) if algebra == TRIANGLE else range(1)
    for counts in product(range(degree + 1), repeat=len(letters)):
        if sum(counts) != degree:
            continue
        skeleton = [L for L, k in zip(letters, counts) for _ in range(k)]
        for states in product(SIGNS, repeat=2 * degree):
            w = tuple((L, states[2 * i], states[2 * i + 1]) for i, L in enumerate(skeleton))
            if nd(w, algebra) == 0:
                yield w


def all_generators(algebra: str = TRIANGLE) -> List[Gen]:
    letters = range(3) if algebra == TRIANGLE else range(1)
    return [(L, s1, s2) for L in letters for s1 in SIGNS for s2 in SIGNS]


# ---------------------------------------------------------------- rules

Rewrite = List[Tuple[Laurent, Word]]


def _pair_rules(x: Gen, y: Gen, algebra: str) -> List[Tuple[str, Rewrite]]:
    """All relations whose left side is the adjacent pair ``x y``.

    Each entry is (kind, rewrite) where kind is ``"sort"`` for a letter
    inversion and ``"state"`` for a state inversion.
    """
    Lx, ex1, ex2 = x
    Ly, ey1, ey2 = y
    out: List[Tuple[str, Rewrite]] = []
    d = (Ly - Lx) % 3
    if d == 0:
        if ex1 == -1 and ey1 == 1:  # equal letters, first edge
            e, e2 = ex2, ey2
            out.append(("state", [(Q2, ((Lx, 1, e), (Lx, -1, e2))),
                                  (-rel_constant(e, e2).shift(5), ())]))
        if ex2 == -1 and ey2 == 1:  # equal letters, second edge
            e, e2 = ex1, ey1
            out.append(("state", [(Q2, ((Lx, e, 1), (Lx, e2, -1))),
                                  (-rel_constant(e, e2).shift(5), ())]))
        return out
    if algebra != TRIANGLE:
        return out
    if d == 1:
        L = Lx
        if ex1 == -1 and ey2 == 1:  # letter then its successor
            e, e2 = ex2, ey1
            out.append(("state", [(Q2, ((L, 1, e), (_rot(L), e2, -1))),
                                  (vpow(5, -1), ((_rot(L, 2), e, e2),))]))
        if Lx > Ly:  # gamma alpha: inverted exchange
            e, e2 = ex1, ex2
            mu, mu2 = ey1, ey2
            out.append(("sort", [(Q_INV, ((_rot(L), mu, e), (L, mu2, e2))),
                                 (rel_constant(e, mu2).shift(2), ((_rot(L, 2), e2, mu),))]))
        return out
    # d == 2: y = tau^-1 x
    if Lx > Ly:  # beta alpha, gamma beta: exchange
        M = Ly
        mu, e = ex1, ex2
        mu2, e2 = ey1, ey2
        out.append(("sort", [(Q, ((M, e, e2), (_rot(M), mu, mu2))),
                             (-rel_constant(e, mu2).shift(4), ((_rot(M, 2), e2, mu),))]))
    if ex2 == -1 and ey1 == 1:  # letter then its predecessor
        L = Lx
        e, e2 = ex1, ey2
        out.append(("state", [(Q2, ((L, e, 1), (_rot(L, 2), -1, e2))),
                              (vpow(-1), ((_rot(L), e2, e),))]))
    return out


class Rewriter:
    """Normal-form engine with a fixed redex-selection strategy.

    ``strategy="leftmost"`` always takes the leftmost letter inversion, then
    the leftmost state inversion.  ``strategy="random"`` picks uniformly
    among every applicable relation, seeded for reproducibility.  Each
    instance keeps its own memo table, so two instances never share work.
    """

    def __init__(self, algebra: str = TRIANGLE, strategy: str = "leftmost", seed: int = 0):
        if strategy not in ("leftmost", "random"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.algebra = algebra
        self.strategy = strategy
        self.rng = random.Random(seed)
        self.memo: Dict[Word, Dict[Word, Laurent]] = {}
        self.steps = 0

    def _redexes(self, w: Word) -> List[Tuple[str, int, Rewrite]]:
        found = []
        for i in range(len(w) - 1):
            for kind, rw in _pair_rules(w[i], w[i + 1], self.algebra):
                found.append((kind, i, rw))
        return found

    def _split_alpha_gamma(self, w: Word):
        """Locate a b-edge inversion between the last alpha and first gamma."""
        if self.algebra != TRIANGLE or not is_sorted(w):
            return None
        ia = max((i for i, g in enumerate(w) if g[0] == 0), default=None)
        ig = min((i for i, g in enumerate(w) if g[0] == 2), default=None)
        if ia is None or ig is None or ig == ia + 1:
            return None
        if w[ia][2] == -1 and w[ig][1] == 1:
            return ia, ig
        return None

    def _alpha_gamma(self, w: Word, ia: int, ig: int) -> Dict[Word, Laurent]:
        """Swap the b-states of alpha and gamma separated by betas.

        The alpha is commuted rightwards past the betas, the alpha gamma
        order relation is applied,
        and it is commuted back; every side term is strictly shorter.
        """
        out: Dict[Word, Laurent] = {}

        def side(c: Laurent, word: Word) -> None:
            for ww, cc in self.reduce(word).items():
                s = out.get(ww, ZERO) + c * cc
                if s:
                    out[ww] = s
                else:
                    out.pop(ww, None)

        main = list(w)
        coeff = ONE
        pos = ia
        while pos + 1 < ig:  # alpha(e,e') beta(m,m') = q^-1 beta(m,e) alpha(m',e') + q C^e_m' gamma(e',m)
            (_, e, e2), (_, mu, mu2) = main[pos], main[pos + 1]
            side(coeff * rel_constant(e, mu2).shift(2),
                 tuple(main[:pos]) + ((2, e2, mu),) + tuple(main[pos + 2:]))
            main[pos], main[pos + 1] = (1, mu, e), (0, mu2, e2)
            coeff = coeff.shift(-2)
            pos += 1
        (_, e, _), (_, _, e2) = main[pos], main[pos + 1]
        side(coeff.shift(-1), tuple(main[:pos]) + ((1, e2, e),) + tuple(main[pos + 2:]))
        main[pos], main[pos + 1] = (0, e, 1), (2, -1, e2)
        coeff = coeff.shift(4)
        while pos > ia:  # beta(m,e) alpha(m',e') = q alpha(e,e') beta(m,m') - q^2 C^e_m' gamma(e',m)
            (_, mu, e), (_, mu2, e2) = main[pos - 1], main[pos]
            side(-coeff * rel_constant(e, mu2).shift(4),
                 tuple(main[:pos - 1]) + ((2, e2, mu),) + tuple(main[pos + 1:]))
            main[pos - 1], main[pos] = (0, e, e2), (1, mu, mu2)
            coeff = coeff.shift(2)
            pos -= 1
        side(coeff, tuple(main))
        return out

    def reduce(self, w: Word) -> Dict[Word, Laurent]:
        w = tuple(w)
        hit = self.memo.get(w)
        if hit is not None:
            return hit
        self.steps += 1
        redexes = self._redexes(w)
        result: Dict[Word, Laurent]
        choice = None
        if self.strategy == "leftmost":
            sorts = [r for r in redexes if r[0] == "sort"]
            if sorts:
                choice = sorts[0]
            else:
                states = [r for r in redexes if r[0] == "state"]
                if states:
                    choice = states[0]
        elif redexes:
            choice = self.rng.choice(redexes + [None] * bool(self._split_alpha_gamma(w)))
        if choice is None:
            ag = self._split_alpha_gamma(w)
            if ag is not None:
                result = self._alpha_gamma(w, *ag)
                self.memo[w] = result
                return result
            if redexes:  # random strategy drew the macro slot but it is absent
                choice = redexes[0]
        if choice is None:
            result = {w: ONE}
        else:
            _, i, rw = choice
            result = {}
            for c, mid in rw:
                for ww, cc in self.reduce(w[:i] + mid + w[i + 2:]).items():
                    s = result.get(ww, ZERO) + c * cc
                    if s:
                        result[ww] = s
                    else:
                        result.pop(ww, None)
        self.memo[w] = result
        return result

    def normal_form(self, w: Sequence[Gen]) -> SkeinElement:
        out = SkeinElement(self.algebra)
        out._t = dict(self.reduce(tuple(w)))
        return out


_DEFAULT: Dict[str, Rewriter] = {}


def default_rewriter(algebra: str = TRIANGLE) -> Rewriter:
    if algebra not in _DEFAULT:
        _DEFAULT[algebra] = Rewriter(algebra, "leftmost")
    return _DEFAULT[algebra]


def normal_form(w: Sequence[Gen], algebra: str = TRIANGLE) -> SkeinElement:
    """Image of an arbitrary word in the normal-word basis."""
    return default_rewriter(algebra).normal_form(w)


def from_words(terms: Iterable[Tuple[Laurent, Sequence[Gen]]], algebra: str = TRIANGLE) -> SkeinElement:
    """Reduce a formal combination of arbitrary words."""
    rw = default_rewriter(algebra)
    out = SkeinElement(algebra)
    for c, w in terms:
        for ww, cc in rw.reduce(tuple(w)).items():
            out._add_term(ww, c * cc)
    return out


def mul(a: SkeinElement, b: SkeinElement) -> SkeinElement:
    a._check(b)
    rw = default_rewriter(a.algebra)
    out = SkeinElement(a.algebra)
    for wa, ca in a._t.items():
        for wb, cb in b._t.items():
            c = ca * cb
            for ww, cc in rw.reduce(wa + wb).items():
                out._add_term(ww, c * cc)
    return out


def tau(a: SkeinElement) -> SkeinElement:
    """Rotation alpha -> beta -> gamma -> alpha of the triangle."""
    if a.algebra != TRIANGLE:
        raise ValueError("tau is only defined on the triangle algebra")
    return from_words(
        ((c, tuple((_rot(L), s1, s2) for L, s1, s2 in w)) for w, c in a._t.items()), TRIANGLE)


def chi(a: SkeinElement) -> SkeinElement:
    """Reflection anti-involution: bar coefficients and reverse words."""
    return from_words(((c.bar(), tuple(reversed(w))) for w, c in a._t.items()), a.algebra)


def degree(a: SkeinElement) -> int:
    if a.is_zero():
        raise ValueError("degree of zero")
    return max(len(w) for w in a._t)


def word_grade(w: Word, algebra: str = TRIANGLE) -> Dict[str, int]:
    return {e: sum(seq) for e, seq in edge_states(w, algebra).items()}


def grade(a: SkeinElement):
    """Boundary grading per edge, or ``"mixed"`` if terms disagree."""
    if a.is_zero():
        raise ValueError("grade of zero")
    grades = {tuple(sorted(word_grade(w, a.algebra).items())) for w in a._t}
    if len(grades) > 1:
        return "mixed"
    return dict(grades.pop())


def leading_part(a: SkeinElement, edge: str) -> SkeinElement:
    """Sub-sum of terms with the largest grading at ``edge``."""
    if a.is_zero():
        raise ValueError("leading part of zero")
    top = max(word_grade(w, a.algebra)[edge] for w in a._t)
    out = SkeinElement(a.algebra)
    out._t = {w: c for w, c in a._t.items() if word_grade(w, a.algebra)[edge] == top}
    return out


def index_vector(w: Word) -> Tuple[int, int, int, int, int, int]:
    """(k1, k2, k3, ka, kb, kc): letter counts and plus counts per edge."""
    k = [0, 0, 0]
    for L, _, _ in w:
        k[L] += 1
    st = edge_states(w, TRIANGLE)
    plus = [sum(1 for s in st[e] if s > 0) for e in ("a", "b", "c")]
    return (k[0], k[1], k[2], plus[0], plus[1], plus[2])


def specialize_element(a: SkeinElement, v0) -> Dict[Word, object]:
    return {w: c.specialize(v0) for w, c in a._t.items()}


# ---------------------------------------------------------------- text

_GEN = re.compile(r"\s*([abg])\(\s*([+-])\s*,\s*([+-])\s*\)\s*")


def parse_word(text: str, algebra: str = TRIANGLE) -> Word:
    """Parse ``"a(+,-) b(+,+)"``; ``"1"`` or an empty string is the empty word."""
    s = text.strip()
    if s in ("", "1"):
        return ()
    out = []
    pos = 0
    while pos < len(s):
        m = _GEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse word at {s[pos:]!r}")
        L = LETTERS.index(m.group(1))
        if algebra == BIGON and L:
            raise ValueError("the bigon algebra only has the letter a")
        out.append((L, 1 if m.group(2) == "+" else -1, 1 if m.group(3) == "+" else -1))
        pos = m.end()
    return tuple(out)


def format_gen(g: Gen) -> str:
    L, s1, s2 = g
    return f"{LETTERS[L]}({'+' if s1 > 0 else '-'},{'+' if s2 > 0 else '-'})"


def format_word(w: Word) -> str:
    return " ".join(format_gen(g) for g in w) if w else "1"


def word_sort_key(w: Word):
    return (-len(w), tuple((L, -s1, -s2) for L, s1, s2 in w))


def format_element(a: SkeinElement, var: str = "q") -> str:
    """Deterministic text: longest words first, coefficients in ``var``."""
    if a.is_zero():
        return "0"
    pieces = []
    for w in sorted(a._t, key=word_sort_key):
        c = a._t[w]
        cs = render(c, var)
        if not w:
            pieces.append(cs if len(c.terms) == 1 else f"({cs})")
            continue
        ws = format_word(w)
        if cs == "1":
            pieces.append(ws)
        elif cs == "-1":
            pieces.append("-" + ws)
        elif len(c.terms) == 1:
            pieces.append(f"{cs} * {ws}")
        else:
            pieces.append(f"({cs}) * {ws}")
    text = pieces[0]
    for p in pieces[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


def parse_element(text: str, algebra: str = TRIANGLE) -> SkeinElement:
    """Parse a single word, optionally prefixed by ``coeff *``."""
    from .qcoeff import parse as parse_scalar
    if "*" in text and "(" in text.split("*")[-1]:
        coeff, _, word = text.rpartition("*")
        return normal_form(parse_word(word, algebra), algebra).scale(parse_scalar(coeff))
    return normal_form(parse_word(text, algebra), algebra)
