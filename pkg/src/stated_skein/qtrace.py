"""Quantum trace: from skein algebras to Chekhov-Fock quantum tori.

For one ideal triangle the torus has generators y_a, y_b, y_c with
y_b y_a = q y_a y_b (cyclically).  A triangulated surface uses one copy per
face, so the big torus is block diagonal and its generator 3f + s is the
lift of face f's slot s.  The Chekhov-Fock algebra of the triangulation is
spanned by Weyl monomials in the y_e, where y_e is the product of the lifts
of edge e.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .qcoeff import Laurent, ONE, ZERO, vpow
from .qtorus import (
    SkewForm, TorusElement, leading_term, sublattice_membership, weyl_monomial,
)
from .skein_presented import TRIANGLE, SkeinElement, Word, rel_constant
from .surface import (
    Component, NotNormalError, SurfaceError, Tangle, Triangulation, decompose,
    default_heights, edge_counts, realize,
)

# slots of the first and second state of alpha, beta, gamma
_SLOTS = {0: (2, 1), 1: (0, 2), 2: (1, 0)}


def triangle_form() -> SkewForm:
    # y_b y_a = q y_a y_b: the orientation under which phi respects the
    # triangle relations with the stacking order of the skein algebra
    return SkewForm.cyclic(("y_a", "y_b", "y_c")).opposite()


def surface_form(t: Triangulation) -> SkewForm:
    if len(t.faces) == 1:
        return triangle_form()
    return SkewForm.block_diagonal(
        [SkewForm.cyclic(tuple(f"y{f}_{x}" for x in "abc")).opposite() for f in range(len(t.faces))]
    )


def phi_word(word: Word, form: SkewForm, face: int = 0) -> TorusElement:
    """Image of a stacked word placed in the given face block."""
    out = TorusElement.one(form)
    for letter, e1, e2 in word:
        if (e1, e2) == (-1, 1):
            return TorusElement(form)
        k = [0] * form.n
        s1, s2 = _SLOTS[letter]
        k[3 * face + s1] += e1
        k[3 * face + s2] += e2
        out = out * weyl_monomial(form, tuple(k))
    return out


def phi(a: SkeinElement, form: Optional[SkewForm] = None, face: int = 0) -> TorusElement:
    if a.algebra != TRIANGLE:
        raise ValueError("phi is defined on the triangle algebra")
    form = form or triangle_form()
    out = TorusElement(form)
    for w, c in a.terms.items():
        out = out + phi_word(w, form, face).scale(c)
    return out


def rotate(x: TorusElement) -> TorusElement:
    """Relabel a -> b -> c -> a inside every face block."""
    # coefficients move with the Weyl monomials, which the rotation preserves
    form = x.form
    out = TorusElement(form)
    for k, c in x.terms.items():
        new = [0] * len(k)
        for i, e in enumerate(k):
            f, s = divmod(i, 3)
            new[3 * f + (s + 1) % 3] = e
        out = out + weyl_monomial(form, tuple(new), c.shift(-form.weyl_shift(k)))
    return out


class ChekhovFock:
    """The subalgebra generated by y_e^{+-1}, one y_e per edge."""

    def __init__(self, t: Triangulation):
        self.t = t
        self.form = surface_form(t)
        self.edges = list(t.edges)
        self.vectors: Dict[str, Tuple[int, ...]] = {}
        for e in self.edges:
            v = [0] * self.form.n
            for f, s in t.inc[e]:
                v[3 * f + s] += 1
            self.vectors[e] = tuple(v)

    def generator(self, e: str, power: int = 1) -> TorusElement:
        """Weyl-normalized y_e^power."""
        return weyl_monomial(self.form, tuple(power * x for x in self.vectors[e]))

    def embed(self, k: Sequence[int]) -> Tuple[int, ...]:
        """Exponent vector of y^k, with k indexed by the declared edges."""
        out = [0] * self.form.n
        for e, m in zip(self.edges, k):
            for i, x in enumerate(self.vectors[e]):
                out[i] += m * x
        return tuple(out)

    def contains(self, a: TorusElement) -> bool:
        return cf_membership(self, a)

    def express(self, a: TorusElement) -> Optional[List[Tuple[Tuple[int, ...], Laurent]]]:
        """Rewrite as sum of c * [prod y_e^{k_e}] (Weyl-normalized), if a member."""
        if not self.contains(a):
            return None
        out = []
        for k, c in sorted(a.terms.items(), reverse=True):
            ke = []
            for e in self.edges:
                (f, s) = self.t.inc[e][0]
                ke.append(k[3 * f + s])
            if self.embed(ke) != k:
                return None
            out.append((tuple(ke), c.shift(-self.form.weyl_shift(k))))
        return out


def cf_membership(cf: ChekhovFock, a: TorusElement) -> bool:
    return sublattice_membership(a, list(cf.vectors.values()))


def kappa(t: Triangulation, d: Tangle, order: Optional[Sequence[str]] = None) -> TorusElement:
    """Quantum trace of a normal tangle: decompose, then phi on every face."""
    form = surface_form(t)
    out = TorusElement(form)
    cache: Dict[Tuple[int, Word], TorusElement] = {}
    for words, c in decompose(t, d, order).terms.items():
        term = TorusElement.one(form)
        for f, w in enumerate(words):
            if (f, w) not in cache:
                cache[(f, w)] = phi_word(w, form, f)
            term = term * cache[(f, w)]
            if term.is_zero():
                break
        out = out + term.scale(c)
    return out


def trace_hat_generator(eps: int, eps2: int, reversed: bool = False) -> TorusElement:
    """Value of the returning arc delta(eps, eps2) of one triangle edge.

    ``eps`` is the state at the later point counterclockwise.  The plain
    arc has its later point higher.
    """
    c = rel_constant(eps, eps2) if not reversed else vpow(6, -1) * rel_constant(eps2, eps)
    return TorusElement.one(triangle_form()).scale(c)


def is_basis_tangle(t: Triangulation, d: Tangle) -> bool:
    """Simple (one layer, no trivial loops), all states +, positive heights."""
    if d.trivial_loops or len(set(c.layer for c in d.components)) > 1:
        return False
    if any(s != 1 for c in d.components for s, _ in c.endpoints):
        return False
    if any(i == j for c in d.components for _, i, j in c.passes):
        return False
    return default_heights(t, _strip_heights(d)) == default_heights(t, d)


def _strip_heights(d: Tangle) -> Tangle:
    from dataclasses import replace

    comps = tuple(replace(c, endpoints=tuple((s, None) for s, _ in c.endpoints)) for c in d.components)
    return Tangle(comps, d.trivial_loops)


def trace_leading(t: Triangulation, d: Tangle) -> Tuple[Tuple[int, ...], Laurent]:
    """Leading exponent and coefficient of kappa on a basis tangle."""
    if not is_basis_tangle(t, d):
        raise SurfaceError("trace_leading needs a simple, all-plus, positively ordered tangle")
    x = kappa(t, d)
    if x.is_zero():
        raise AssertionError("kappa of a basis tangle vanished")
    return leading_term(x)


def k_vector(t: Triangulation, d: Tangle) -> Tuple[int, ...]:
    return edge_counts(t, d)


def omega(t: Triangulation, d: Tangle) -> Tangle:
    """All-plus stated tangle of a tangle whose arcs end at marked points.

    Endpoints at marked points carry state 0; each is pushed onto the
    boundary edge it is listed on and given state +, keeping the heights.
    """
    from dataclasses import replace

    comps = []
    for c in d.components:
        if c.kind == "arc":
            for s, _ in c.endpoints:
                if s != 0:
                    raise SurfaceError("omega expects endpoints at marked points (state 0)")
            comps.append(replace(c, endpoints=tuple((1, h) for _, h in c.endpoints)))
        else:
            comps.append(c)
    return Tangle(tuple(comps), d.trivial_loops)
