"""Rational functions of the shape ``N * B**(-m)`` over a fixed base polynomial ``B``.

For the group computations ``B`` is ``P = (1+|q|^2)^2 + |omega|^2``; translated
or dilated copies of ``P`` are also valid bases. Keeping denominators to powers
of one base avoids multivariate gcds: normalisation only ever divides by ``B``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .poly import Poly


class NotNormalizable(ValueError):
    pass


_POW_CACHE: dict = {}


def _base_pow(base: Poly, k: int) -> Poly:
    key = (base, k)
    out = _POW_CACHE.get(key)
    if out is None:
        if len(_POW_CACHE) > 256:
            _POW_CACHE.clear()
        out = _POW_CACHE[key] = base ** k
    return out


class PowerSum:
    __slots__ = ("num", "power", "base")

    def __init__(self, num: Poly, power: int, base: Poly, *, normalize: bool = True):
        if power < 0:
            raise ValueError("power must be non-negative")
        if num.nvars != base.nvars:
            raise ValueError("numerator and base use different variable sets")
        self.num = num
        self.power = power
        self.base = base
        if normalize:
            self._normalize()

    def _normalize(self):
        while self.power > 0 and not self.num.is_zero():
            res = self.num.divmod(self.base, exact_only=True)
            if res is None:
                break
            self.num = res[0]
            self.power -= 1
        if self.num.is_zero():
            self.power = 0

    @classmethod
    def poly(cls, p: Poly, base: Poly) -> "PowerSum":
        return cls(p, 0, base, normalize=False)

    @classmethod
    def const(cls, c, base: Poly) -> "PowerSum":
        return cls(Poly.const(base.nvars, c), 0, base, normalize=False)

    @classmethod
    def base_power(cls, k: int, base: Poly, coeff=1) -> "PowerSum":
        """``coeff * base**k`` for any integer ``k``."""
        one = Poly.const(base.nvars, coeff)
        if k >= 0:
            return cls(one * base ** k, 0, base, normalize=False)
        return cls(one, -k, base, normalize=False)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    # ---- arithmetic ---------------------------------------------------
    def _lift(self, other) -> "PowerSum":
        if isinstance(other, PowerSum):
            if other.nvars != self.nvars:
                raise ValueError("PowerSums over different variable sets")
            return other
        if isinstance(other, Poly):
            return PowerSum.poly(other, self.base)
        if isinstance(other, (int, Fraction)):
            return PowerSum.const(other, self.base)
        return NotImplemented

    def _common_base(self, other: "PowerSum") -> Poly:
        if self.power == 0:
            return other.base
        if other.power == 0 or self.base == other.base:
            return self.base
        raise ValueError("cannot combine PowerSums over different bases")

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        base = self._common_base(other)
        m = max(self.power, other.power)
        a = self.num * _base_pow(base, m - self.power) if m > self.power else self.num
        b = other.num * _base_pow(base, m - other.power) if m > other.power else other.num
        return PowerSum(a + b, m, base)

    __radd__ = __add__

    def __neg__(self):
        return PowerSum(-self.num, self.power, self.base, normalize=False)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        base = self._common_base(other)
        return PowerSum(self.num * other.num, self.power + other.power, base)

    __rmul__ = __mul__

    def scale(self, c) -> "PowerSum":
        return PowerSum(self.num.scale(c), self.power, self.base, normalize=False)

    def as_base_power(self):
        """Return ``(c, k)`` with ``self == c * base**k``, or ``None``."""
        num, k = self.num, -self.power
        if num.is_zero():
            return None
        while not num.is_const():
            res = num.divmod(self.base, exact_only=True)
            if res is None:
                return None
            num, k = res[0], k + 1
        return num.const_value(), k

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("only integer powers are supported")
        if e >= 0:
            out = PowerSum.const(1, self.base)
            for _ in range(e):
                out = out * self
            return out
        bp = self.as_base_power()
        if bp is None:
            raise NotNormalizable("negative power of a non-P base")
        c, k = bp
        return PowerSum.base_power(k * e, self.base, Fraction(c) ** e)

    # ---- calculus -------------------------------------------------------
    def derive(self, i: int) -> "PowerSum":
        dn = self.num.derive(i)
        if self.power == 0:
            return PowerSum(dn, 0, self.base, normalize=False)
        db = self.base.derive(i)
        num = dn * self.base - (self.num * db).scale(self.power)
        return PowerSum(num, self.power + 1, self.base)

    def compose(self, subs: list, new_base: Poly) -> "PowerSum":
        """Substitute polynomials for variables; ``new_base`` must equal ``base`` after substitution."""
        if self.base.compose(subs) != new_base:
            raise ValueError("substituted base does not match the supplied new base")
        return PowerSum(self.num.compose(subs), self.power, new_base)

    # ---- predicates and evaluation -------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.num, self.power))

    def evaluate(self, point) -> Fraction:
        b = self.base.evaluate(point)
        return self.num.evaluate(point) / b ** self.power

    def evaluate_np(self, X: np.ndarray) -> np.ndarray:
        out = self.num.evaluate_np(X)
        if self.power:
            out = out / self.base.evaluate_np(X) ** self.power
        return out

    def __repr__(self):
        if self.power == 0:
            return f"PowerSum({self.num.to_str()})"
        return f"PowerSum(({self.num.to_str()}) * B^-{self.power})"


def is_zero(f: PowerSum) -> bool:
    return f.is_zero()
