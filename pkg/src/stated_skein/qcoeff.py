"""Laurent polynomials in v = q^(1/2) with integer coefficients.

This is the ground ring for everything else in the package.  Elements are
immutable and hashable; zero is the empty map.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class Laurent:
    """An element of Z[v, v^-1], stored as ``{exponent: coefficient}``."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[int, int] | None = None):
        if terms:
            self._t = {k: c for k, c in terms.items() if c}
        else:
            self._t = {}
        self._h = None

    @classmethod
    def _raw(cls, terms: dict) -> "Laurent":
        # terms must already be free of zeros
        out = cls.__new__(cls)
        out._t = terms
        out._h = None
        return out

    @classmethod
    def monomial(cls, k: int = 1, c: int = 1) -> "Laurent":
        return cls._raw({k: c}) if c else cls._raw({})

    @classmethod
    def const(cls, c: int) -> "Laurent":
        return cls.monomial(0, c)

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def degree(self) -> int:
        if not self._t:
            raise ValueError("degree of zero")
        return max(self._t)

    def valuation(self) -> int:
        if not self._t:
            raise ValueError("valuation of zero")
        return min(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def __add__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return Laurent._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, int):
            if not other:
                return Laurent._raw({})
            return Laurent._raw({k: c * other for k, c in self._t.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        a, b = self._t, other._t
        if len(a) == 1:
            (ka, ca), = a.items()
            return Laurent._raw({ka + k: ca * c for k, c in b.items()})
        if len(b) == 1:
            (kb, cb), = b.items()
            return Laurent._raw({kb + k: cb * c for k, c in a.items()})
        t: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                t[k] = t.get(k, 0) + ca * cb
        return Laurent._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            (k, c), = self._t.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return Laurent.monomial(k * n, c ** (-n))
        out = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "Laurent":
        """Multiply by v^k."""
        if not k:
            return self
        return Laurent._raw({e + k: c for e, c in self._t.items()})

    def bar(self) -> "Laurent":
        return Laurent._raw({-k: c for k, c in self._t.items()})

    def specialize(self, v0: Number) -> Fraction:
        v0 = Fraction(v0)
        if v0 == 0:
            raise ZeroDivisionError("cannot evaluate a Laurent polynomial at v = 0")
        return sum((c * v0 ** k for k, c in self._t.items()), Fraction(0))

    def dot_equal(self, other: "Laurent") -> bool:
        """True iff self = v^j * other for some integer j."""
        if not self._t or not other._t:
            return not self._t and not other._t
        j = max(self._t) - max(other._t)
        return self == other.shift(j)

    def __repr__(self) -> str:
        return f"Laurent({self})"

    def __str__(self) -> str:
        return render(self, "v")


def _render_power(var: str, k: int) -> str:
    if var == "v":
        if k == 0:
            return ""
        return "v" if k == 1 else f"v^{k}"
    # q-notation, k is a power of v
    if k == 0:
        return ""
    if k % 2 == 0:
        e = k // 2
        return "q" if e == 1 else f"q^{e}"
    return f"q^{{{k}/2}}"


def render(x: Laurent, var: str = "v") -> str:
    """Text form sorted by descending exponent, e.g. ``v^3 - 2*v^-1``.

    With ``var="q"`` powers are written in q, half powers as ``q^{k/2}``.
    """
    if x.is_zero():
        return "0"
    out = []
    for k, c in x.items():
        p = _render_power(var, k)
        mag = abs(c)
        if not p:
            body = str(mag)
        elif mag == 1:
            body = p
        else:
            body = f"{mag}*{p}"
        if not out:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*\*?\s*)?
        (?:(?P<var>[vq])
           (?:\^(?:\{(?P<frac>-?\d+)/2\}|\{(?P<braced>-?\d+)\}|(?P<exp>-?\d+)))?)?
        \s*""",
    re.VERBOSE,
)


def parse(text: str) -> Laurent:
    """Parse the rendered grammar; ``q`` stands for ``v^2``."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    pos = 0
    total = Laurent()
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar at {s[pos:]!r}")
        if not first and not m.group("sign"):
            raise ValueError(f"missing operator in {s!r}")
        if m.group("coef") is None and m.group("var") is None:
            raise ValueError(f"dangling sign in {s!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = int(m.group("coef")) if m.group("coef") else 1
        k = 0
        if m.group("var"):
            if m.group("frac") is not None:
                if m.group("var") != "q":
                    raise ValueError("half powers are only allowed on q")
                k = int(m.group("frac"))
            else:
                e = m.group("braced") or m.group("exp")
                e = int(e) if e is not None else 1
                k = 2 * e if m.group("var") == "q" else e
        total = total + Laurent.monomial(k, sign * coef)
        pos = m.end()
        first = False
    return total


def add(a: Laurent, b: Laurent) -> Laurent:
    return a + b


def mul(a: Laurent, b: Laurent) -> Laurent:
    return a * b


def bar(a: Laurent) -> Laurent:
    return a.bar()


def dot_equal(a: Laurent, b: Laurent) -> bool:
    return a.dot_equal(b)


def specialize(a: Laurent, v0: Number) -> Fraction:
    return a.specialize(v0)


def lsum(xs: Iterable[Laurent]) -> Laurent:
    total = Laurent()
    for x in xs:
        total = total + x
    return total


ZERO = Laurent()
ONE = Laurent.const(1)
V = Laurent.monomial(1)


def vpow(k: int, c: int = 1) -> Laurent:
    return Laurent.monomial(k, c)


def qpow(k: int, c: int = 1) -> Laurent:
    """c * q^k for integer k."""
    return Laurent.monomial(2 * k, c)


LOOP = vpow(4, -1) + vpow(-4, -1)  # -q^2 - q^-2
