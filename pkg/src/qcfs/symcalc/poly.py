"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable

import numpy as np

Exps = tuple


def _coef(c):
    """Canonical exact coefficient: ``int`` when integral, else ``Fraction``."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, float):
        raise TypeError("float coefficients are not allowed in exact polynomials")
    return _coef(Fraction(c))


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return _coef(Fraction(a) / b)


def _grlex_key(e: Exps):
    return (sum(e), e)


class Poly:
    """Polynomial in ``nvars`` variables, stored as ``{exponents: Fraction}``.

    Zero coefficients are never stored, so structural equality is polynomial
    equality. Monomials are compared in graded lexicographic order.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        self._hash = None
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                c = _coef(c)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = _coef(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1})

    # ---- structure -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return Fraction(self.terms.get((0,) * self.nvars, 0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        """Leading (exponents, coefficient) in graded-lex order."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # ---- ring operations -------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different variable sets")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = _coef(s)
                else:
                    del out[e]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = _coef(c)
        if not c:
            return Poly._raw(self.nvars, {})
        return Poly._raw(self.nvars, {e: _coef(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Poly._raw(self.nvars, {e: _coef(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: Exps, c: Fraction) -> "Poly":
        return Poly._raw(self.nvars, {
            tuple(x + y for x, y in zip(e, exps)): _coef(v * c) for e, v in self.terms.items()
        })

    # ---- calculus and substitution ----------------------------------
    def derive(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = list(e)
                e2[i] = k - 1
                out[tuple(e2)] = _coef(c * k)
        return Poly._raw(self.nvars, out)

    def compose(self, subs: list) -> "Poly":
        """Substitute ``subs[i]`` (a Poly, possibly in another variable set) for variable ``i``."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        target = subs[0].nvars
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = subs[i] ** k
            return cache[key]

        out = Poly.const(target, 0)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def scale_vars(self, factors: list) -> "Poly":
        """Substitute ``x_i -> factors[i] * x_i`` with rational factors."""
        out = {}
        for e, c in self.terms.items():
            v = c
            for f, k in zip(factors, e):
                if k:
                    v = v * Fraction(f) ** k
            if v:
                out[e] = _coef(v)
        return Poly._raw(self.nvars, out)

    def evaluate(self, point):
        """Exact evaluation at a point of rationals/ints."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def evaluate_np(self, X: np.ndarray) -> np.ndarray:
        """Float evaluation at points ``X`` of shape ``(..., nvars)``."""
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[:-1])
        if not self.terms:
            return out
        maxdeg = [0] * self.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                if k > maxdeg[i]:
                    maxdeg[i] = k
        powers = {}
        for i, d in enumerate(maxdeg):
            if d:
                col = X[..., i]
                acc = [np.ones_like(col), col]
                for _ in range(2, d + 1):
                    acc.append(acc[-1] * col)
                powers[i] = acc
        for e, c in self.terms.items():
            term = np.full(X.shape[:-1], float(c))
            for i, k in enumerate(e):
                if k:
                    term = term * powers[i][k]
            out = out + term
        return out

    # ---- division ----------------------------------------------------
    def divmod(self, divisor: "Poly", exact_only: bool = False):
        """Multivariate division by a single polynomial in graded-lex order.

        Returns ``(quotient, remainder)``; for a single divisor the remainder
        is zero exactly when the division is exact. With ``exact_only`` the
        loop stops at the first irreducible term and returns ``None``
        instead, since the remainder can then no longer vanish.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = divisor.leading()
        rem = dict(self.terms)
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        rest: dict = {}
        dterms = list(divisor.terms.items())
        while heap:
            _, neg = heapq.heappop(heap)
            e = tuple(-x for x in neg)
            c = rem.get(e)
            if c is None:
                continue
            if all(a >= b for a, b in zip(e, lt_e)):
                m = tuple(a - b for a, b in zip(e, lt_e))
                f = _div(c, lt_c)
                quot[m] = quot.get(m, 0) + f
                for de, dc in dterms:
                    ne = tuple(a + b for a, b in zip(de, m))
                    old = rem.get(ne)
                    val = (old if old is not None else 0) - f * dc
                    if val:
                        if old is None:
                            heapq.heappush(heap, (-sum(ne), tuple(-x for x in ne)))
                        rem[ne] = _coef(val)
                    elif old is not None:
                        del rem[ne]
            else:
                if exact_only:
                    return None
                rest[e] = c
                del rem[e]
        quot = {e: _coef(c) for e, c in quot.items() if c}
        return Poly._raw(self.nvars, quot), Poly._raw(self.nvars, rest)

    # ---- display ----------------------------------------------------
    def to_str(self, names: list | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"v{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if mono:
                if c == 1:
                    s = mono
                elif c == -1:
                    s = "-" + mono
                else:
                    s = f"{c}*{mono}"
            else:
                s = str(c)
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.to_str()})"


def poly_divide_exact(a: Poly, b: Poly) -> Poly | None:
    """Exact quotient ``a / b`` or ``None`` when ``b`` does not divide ``a``."""
    res = a.divmod(b, exact_only=True)
    return None if res is None else res[0]


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    out = Poly.const(nvars, 0)
    for p in polys:
        out = out + p
    return out
