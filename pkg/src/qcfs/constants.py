"""Closed-form constants as exact products of prime and pi powers.

Every constant needed here is a product ``+- prod p_i^{e_i} * pi^{e}`` with
rational exponents, so an exact value is a sorted tuple of
``(base, exponent)`` pairs and equality is structural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

PI = "pi"


def _factorize(k: int) -> dict:
    out: dict = {}
    d = 2
    while d * d <= k:
        while k % d == 0:
            out[d] = out.get(d, 0) + 1
            k //= d
        d += 1
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def _base_key(b):
    return (1, 0) if b == PI else (0, b)


@dataclass(frozen=True)
class Exact:
    """``sign * prod base**exp`` with rational exponents; bases are primes or ``"pi"``."""

    sign: int
    factors: tuple = ()

    @classmethod
    def of(cls, x) -> "Exact":
        if isinstance(x, Exact):
            return x
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero is not representable as a product of powers")
        acc: dict = {}
        for p, e in _factorize(abs(x.numerator)).items():
            acc[p] = acc.get(p, 0) + e
        for p, e in _factorize(x.denominator).items():
            acc[p] = acc.get(p, 0) - e
        return cls._build(1 if x > 0 else -1, acc)

    @classmethod
    def pi(cls) -> "Exact":
        return cls(1, ((PI, Fraction(1)),))

    @classmethod
    def _build(cls, sign: int, acc: dict) -> "Exact":
        items = sorted(((b, Fraction(e)) for b, e in acc.items() if e), key=lambda t: _base_key(t[0]))
        return cls(sign, tuple(items))

    def __mul__(self, other):
        other = Exact.of(other)
        acc = dict(self.factors)
        for b, e in other.factors:
            acc[b] = acc.get(b, 0) + e
        return Exact._build(self.sign * other.sign, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * Exact.of(other) ** -1

    def __rtruediv__(self, other):
        return Exact.of(other) * self ** -1

    def __pow__(self, e):
        e = Fraction(e)
        if self.sign < 0 and e.denominator != 1:
            raise ValueError("fractional power of a negative constant")
        sign = self.sign if e.numerator % 2 else 1
        return Exact._build(sign, {b: x * e for b, x in self.factors})

    def __eq__(self, other):
        if not isinstance(other, Exact):
            try:
                other = Exact.of(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.sign == other.sign and self.factors == other.factors

    def __hash__(self):
        return hash((self.sign, self.factors))

    def is_rational(self) -> bool:
        return all(b != PI and e.denominator == 1 for b, e in self.factors)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        out = Fraction(self.sign)
        for b, e in self.factors:
            out *= Fraction(b) ** int(e)
        return out

    def __float__(self):
        log = 0.0
        for b, e in self.factors:
            log += float(e) * (math.log(math.pi) if b == PI else math.log(b))
        return self.sign * math.exp(log)

    def __str__(self):
        if not self.factors:
            return str(self.sign)
        parts = []
        for b, e in self.factors:
            parts.append(str(b) if e == 1 else f"{b}^({e})")
        s = "*".join(parts)
        return ("-" if self.sign < 0 else "") + s

    def __repr__(self):
        return f"Exact({self})"


def gamma_half_integer(k) -> Exact:
    """``Gamma(k)`` for positive integer or half-integer ``k``."""
    k = Fraction(k)
    if k <= 0 or (2 * k).denominator != 1:
        raise ValueError(f"unsupported Gamma argument {k}")
    if k.denominator == 1:
        return Exact.of(math.factorial(int(k) - 1))
    m = int(k - Fraction(1, 2))
    coeff = Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m))
    return Exact.of(coeff) * Exact.pi() ** Fraction(1, 2)


def sphere_area(n: int) -> Exact:
    """Area of the unit sphere ``S^{4n+3}``: ``2 pi^{2n+2} / (2n+1)!``."""
    return Exact.of(Fraction(2, math.factorial(2 * n + 1))) * Exact.pi() ** (2 * n + 2)


def htype_constant(n: int) -> Exact:
    """Sharp constant for the H-type normalisation ``(1+|q|^2)^2 + 16|omega|^2``."""
    _check_n(n)
    N = 4 * n + 6
    return (Exact.of(4 * n * (4 * n + 4)) ** Fraction(-1, 2)
            * Exact.of(4) ** Fraction(3, N)
            * Exact.pi() ** Fraction(-(4 * n + 3), 2 * N)
            * (gamma_half_integer(4 * n + 3) / gamma_half_integer(Fraction(4 * n + 3, 2))) ** Fraction(1, N))


def _check_n(n: int):
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be an integer >= 1")


@dataclass(frozen=True)
class ConstantTable:
    n: int
    Q: int
    two_star: Fraction
    a: Fraction
    K: Fraction
    Stilde: Fraction
    lambda1: Fraction
    omega: Exact
    Lambda_Theta: Exact
    Lambda_A: Exact
    Lambda_B: Exact
    S2_A: Exact
    S2_B: Exact
    S_Theta: Exact
    lambda_sphere: Exact
    S2_htype: Exact
    adjudicated: str | None = field(default=None)

    FIELDS = ("n", "Q", "two_star", "a", "K", "Stilde", "lambda1", "omega", "Lambda_Theta",
              "Lambda_A", "Lambda_B", "S2_A", "S2_B", "S_Theta", "lambda_sphere", "S2_htype",
              "adjudicated")

    def with_adjudication(self, which: str) -> "ConstantTable":
        if which not in ("A", "B"):
            raise ValueError("adjudication must be 'A' or 'B'")
        return _replace(self, adjudicated=which)

    @property
    def vol_theta_factor(self) -> Fraction:
        """``Vol_Theta~ = vol_theta_factor * dH``."""
        return Fraction(math.factorial(2 * self.n), 8)

    @property
    def vol_eta_density(self) -> int:
        """``Vol_eta~ = vol_eta_density * (round measure)``."""
        return 2 ** (2 * self.n + 3) * math.factorial(2 * self.n)

    @property
    def sphere_volume(self) -> Exact:
        return Exact.of(self.vol_eta_density) * self.omega

    def to_dict(self) -> dict:
        out = {}
        exact = {}
        for name in self.FIELDS:
            v = getattr(self, name)
            if isinstance(v, Fraction):
                out[name] = int(v) if v.denominator == 1 else float(v)
                exact[name] = str(v)
            elif isinstance(v, Exact):
                out[name] = float(v)
                exact[name] = str(v)
            else:
                out[name] = v
        out["exact"] = exact
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def _replace(t: ConstantTable, **kw) -> ConstantTable:
    vals = {name: getattr(t, name) for name in ConstantTable.FIELDS}
    vals.update(kw)
    return ConstantTable(**vals)


def table(n: int) -> ConstantTable:
    _check_n(n)
    Q = 4 * n + 6
    two_star = Fraction(2 * Q, Q - 2)
    a = Fraction(4 * (Q + 2), Q - 2)
    K = Fraction((Q - 2) * (Q - 6), 8)
    Stilde = Fraction((Q + 2) * (Q - 6), 2)
    lambda1 = Stilde / (Q + 2)
    omega = sphere_area(n)
    root = Fraction(1, 2 * n + 3)
    lead = Exact.of(4 * n * (n + 1))
    Lambda_Theta = lead * (Exact.of(math.factorial(2 * n)) * omega) ** root
    Lambda_A = lead * (Exact.of(8) * omega) ** root
    Lambda_B = lead * (Exact.of(Fraction(1, 2 ** (2 * n))) * omega) ** root
    half = Fraction(-1, 2)
    return ConstantTable(
        n=n, Q=Q, two_star=two_star, a=a, K=K, Stilde=Stilde, lambda1=lambda1, omega=omega,
        Lambda_Theta=Lambda_Theta, Lambda_A=Lambda_A, Lambda_B=Lambda_B,
        S2_A=Lambda_A ** half, S2_B=Lambda_B ** half, S_Theta=Lambda_Theta ** half,
        lambda_sphere=Exact.of(a) * Lambda_Theta, S2_htype=htype_constant(n),
    )


def table_identities(t: ConstantTable) -> dict:
    """Exact identities the table must satisfy, name -> bool."""
    return {
        "lambda1 = Stilde/(Q+2)": t.lambda1 == t.Stilde / (t.Q + 2),
        "lambda1 = 2n": t.lambda1 == 2 * t.n,
        "a = 4(2*-1)": t.a == 4 * (t.two_star - 1),
        "K = 2n(n+1)": t.K == 2 * t.n * (t.n + 1),
        "Stilde/K = a": t.Stilde / t.K == t.a,
        "lambda_sphere = a Lambda_Theta": t.lambda_sphere == Exact.of(t.a) * t.Lambda_Theta,
        "lambda_sphere = 16n(n+2)((2n)! omega)^(1/(2n+3))": t.lambda_sphere == Exact.of(16 * t.n * (t.n + 2))
        * (Exact.of(math.factorial(2 * t.n)) * t.omega) ** Fraction(1, 2 * t.n + 3),
        "S_Theta = Lambda_Theta^(-1/2)": t.S_Theta ** -2 == t.Lambda_Theta,
        "Lambda_A / Lambda_B = 2": t.Lambda_A / t.Lambda_B == Exact.of(2),
        "Lambda_Theta = ((2n)!/8)^(1/(2n+3)) Lambda_A": t.Lambda_Theta
        == (Exact.of(Fraction(math.factorial(2 * t.n), 8)) ** Fraction(1, 2 * t.n + 3)) * t.Lambda_A,
        "4 lambda1 (2*-1) - (2*-2) Stilde = 0": second_variation_residual(t.n) == 0,
    }


def second_variation_residual(n: int, lambda1: Fraction | None = None) -> Fraction:
    t = table(n)
    lam = t.lambda1 if lambda1 is None else Fraction(lambda1)
    return 4 * lam * (t.two_star - 1) - (t.two_star - 2) * t.Stilde
