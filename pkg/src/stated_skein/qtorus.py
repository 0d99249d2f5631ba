"""Quantum tori: Laurent monomials with x_i x_j = q^{L[i][j]} x_j x_i.

Monomials are kept in the fixed generator order x_1^{k_1} ... x_n^{k_n};
products are re-canonicalized with the commutation form.  Everything is
exact, and half powers of q are integer powers of v.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .qcoeff import Laurent, ONE, render

Exponent = tuple


class SkewForm:
    """Antisymmetric integer matrix with optional generator names."""

    __slots__ = ("n", "lam", "names")

    def __init__(self, lam: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        n = len(lam)
        lam = tuple(tuple(int(x) for x in row) for row in lam)
        for i in range(n):
            if len(lam[i]) != n:
                raise ValueError("commutation matrix must be square")
            for j in range(n):
                if lam[i][j] != -lam[j][i]:
                    raise ValueError(f"commutation matrix is not antisymmetric at ({i}, {j})")
        if names is not None and len(names) != n:
            raise ValueError("need one name per generator")
        self.n = n
        self.lam = lam
        self.names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(n))

    @classmethod
    def cyclic(cls, names: Sequence[str] = ("a", "b", "c")) -> "SkewForm":
        """Triangle form y_a y_b = q y_b y_a, y_b y_c = q y_c y_b, y_c y_a = q y_a y_c."""
        return cls([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], names)

    def opposite(self) -> "SkewForm":
        """The form of the opposite algebra, -lambda."""
        return SkewForm([[-x for x in row] for row in self.lam], self.names)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["SkewForm"]) -> "SkewForm":
        n = sum(b.n for b in blocks)
        lam = [[0] * n for _ in range(n)]
        names = []
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    lam[off + i][off + j] = b.lam[i][j]
            names.extend(b.names)
            off += b.n
        return cls(lam, names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def pairing(self, a: Exponent, b: Exponent) -> int:
        """Power of v picked up by x^a x^b = v^{pairing} x^{a+b}."""
        lam = self.lam
        total = 0
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = lam[i]
            for j in range(i):
                bj = b[j]
                if bj:
                    total += ai * bj * row[j]
        return 2 * total

    def weyl_shift(self, k: Exponent) -> int:
        """Power of v relating the Weyl monomial [x^k] to the ordered x^k."""
        lam = self.lam
        total = 0
        for i, ki in enumerate(k):
            if not ki:
                continue
            row = lam[i]
            for j in range(i + 1, len(k)):
                if k[j]:
                    total += ki * k[j] * row[j]
        return -total

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewForm) and self.lam == other.lam

    def __hash__(self) -> int:
        return hash(self.lam)

    def __repr__(self) -> str:
        return f"SkewForm(n={self.n}, names={self.names})"


class TorusElement:
    """Finite sum of coefficient * x^k in a fixed quantum torus."""

    __slots__ = ("form", "_t")

    def __init__(self, form: SkewForm, terms: dict | None = None):
        self.form = form
        self._t = {}
        if terms:
            for k, c in terms.items():
                k = tuple(k)
                if len(k) != form.n:
                    raise ValueError("exponent vector has the wrong length")
                if not isinstance(c, Laurent):
                    c = Laurent.const(c)
                if c:
                    self._t[k] = self._t.get(k, Laurent()) + c
                    if not self._t[k]:
                        del self._t[k]

    @classmethod
    def one(cls, form: SkewForm) -> "TorusElement":
        return cls(form, {(0,) * form.n: ONE})

    @classmethod
    def monomial(cls, form: SkewForm, k: Exponent, c: Laurent = ONE) -> "TorusElement":
        return cls(form, {tuple(k): c})

    @classmethod
    def generator(cls, form: SkewForm, i: int, e: int = 1) -> "TorusElement":
        k = [0] * form.n
        k[i] = e
        return cls(form, {tuple(k): ONE})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def _check(self, other: "TorusElement") -> None:
        if self.form != other.form:
            raise ValueError("elements live in different quantum tori")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.form == other.form and self._t == other._t

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k, Laurent()) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        out = TorusElement(self.form)
        out._t = t
        return out

    def __neg__(self) -> "TorusElement":
        out = TorusElement(self.form)
        out._t = {k: -c for k, c in self._t.items()}
        return out

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def scale(self, c: Laurent) -> "TorusElement":
        out = TorusElement(self.form)
        if c:
            out._t = {k: c * x for k, x in self._t.items()}
        return out

    def __mul__(self, other) -> "TorusElement":
        if isinstance(other, (Laurent, int)):
            return self.scale(other if isinstance(other, Laurent) else Laurent.const(other))
        self._check(other)
        form = self.form
        t: dict = {}
        for ka, ca in self._t.items():
            for kb, cb in other._t.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                c = (ca * cb).shift(form.pairing(ka, kb))
                s = t.get(k, Laurent()) + c
                if s:
                    t[k] = s
                else:
                    t.pop(k, None)
        out = TorusElement(form)
        out._t = t
        return out

    def __rmul__(self, other) -> "TorusElement":
        if isinstance(other, (Laurent, int)):
            return self.__mul__(other)
        return NotImplemented

    def map_coefficients(self, f) -> "TorusElement":
        out = TorusElement(self.form)
        for k, c in self._t.items():
            c = f(c)
            if c:
                out._t[k] = c
        return out

    def serialize(self) -> list:
        return [
            {"exponents": list(k), "coeff": str(c)}
            for k, c in sorted(self._t.items(), reverse=True)
        ]

    def __repr__(self) -> str:
        return f"TorusElement({self})"

    def __str__(self) -> str:
        return format_element(self, "v")


def format_element(x: TorusElement, var: str = "v", weyl: bool = False) -> str:
    """Readable text, e.g. ``v^-1 * y_b y_c``.

    With ``weyl=True`` each monomial is shown as a Weyl-normalized product,
    written ``[...]``.
    """
    if x.is_zero():
        return "0"
    parts = []
    for k, c in sorted(x.terms.items(), reverse=True):
        if weyl:
            c = c.shift(-x.form.weyl_shift(k))
        mono = []
        for name, e in zip(x.form.names, k):
            if e == 1:
                mono.append(name)
            elif e:
                mono.append(f"{name}^{e}")
        m = " ".join(mono)
        if weyl and m:
            m = f"[{m}]"
        cs = render(c, var)
        if not m:
            parts.append(f"({cs})" if len(c.terms) > 1 else cs)
        elif cs == "1":
            parts.append(m)
        elif cs == "-1":
            parts.append(f"-{m}")
        elif len(c.terms) > 1:
            parts.append(f"({cs}) * {m}")
        else:
            parts.append(f"{cs} * {m}")
    return " + ".join(parts)


def torus_mul(a: TorusElement, b: TorusElement) -> TorusElement:
    return a * b


def weyl_monomial(form: SkewForm, k: Exponent, c: Laurent = ONE) -> TorusElement:
    return TorusElement.monomial(form, k, c.shift(form.weyl_shift(tuple(k))))


def weyl(form: SkewForm, factors: Iterable[tuple]) -> TorusElement:
    """Weyl-normalized product of ``(generator index, exponent)`` factors.

    The result only depends on the total exponent vector, so it does not
    change when the factors are reordered.
    """
    k = [0] * form.n
    for i, e in factors:
        k[i] += e
    return weyl_monomial(form, tuple(k))


def leading_term(a: TorusElement) -> tuple:
    """Lex-largest exponent vector with its coefficient."""
    if a.is_zero():
        raise ValueError("zero has no leading term")
    k = max(a.terms)
    return k, a.terms[k]


def lattice_member(vec: Sequence[int], gens: Sequence[Sequence[int]]) -> bool:
    """Is ``vec`` an integer combination of ``gens``?"""
    vec = list(vec)
    if not any(vec):
        return True
    if not gens:
        return False
    A = Matrix([list(g) for g in gens])
    S, U, W = smith_normal_decomp(A)
    # vec = x A  <=>  vec W = (x U^-1) S
    w = Matrix([vec]) * W
    r = min(S.shape)
    for j in range(S.shape[1]):
        d = S[j, j] if j < r else 0
        if d == 0:
            if w[0, j] != 0:
                return False
        elif w[0, j] % d != 0:
            return False
    return True


def sublattice_membership(a: TorusElement, gens: Sequence[Sequence[int]]) -> bool:
    """True iff every exponent vector of ``a`` lies in the span of ``gens``."""
    return all(lattice_member(k, gens) for k in a.terms)
