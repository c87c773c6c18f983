"""Coordinate layout of the group and the standard polynomials on it.

Flat order: ``t1, x1, y1, z1, ..., tn, xn, yn, zn, x, y, z``.
"""

from __future__ import annotations

from functools import lru_cache

from .poly import Poly
from .powersum import PowerSum


def nvars(n: int) -> int:
    return 4 * n + 3


def var_names(n: int) -> list:
    names = []
    for a in range(1, n + 1):
        names += [f"t{a}", f"x{a}", f"y{a}", f"z{a}"]
    return names + ["x", "y", "z"]


def var_index(name: str, n: int) -> int:
    if name in ("x", "y", "z"):
        return 4 * n + "xyz".index(name)
    kind, idx = name[0], name[1:]
    if kind not in "txyz" or not idx.isdigit():
        raise KeyError(name)
    a = int(idx)
    if not 1 <= a <= n:
        raise IndexError(f"variable {name} out of range for n={n}")
    return 4 * (a - 1) + "txyz".index(kind)


def q_index(alpha: int, comp: int) -> int:
    """Flat index of component ``comp`` (0..3 = t,x,y,z) of ``q_alpha`` (1-based)."""
    return 4 * (alpha - 1) + comp


def omega_index(n: int, s: int) -> int:
    """Flat index of the vertical coordinate ``s`` (1..3 = x,y,z)."""
    return 4 * n + s - 1


@lru_cache(maxsize=None)
def coord(n: int, i: int) -> Poly:
    return Poly.var(nvars(n), i)


@lru_cache(maxsize=None)
def q_norm_sq(n: int) -> Poly:
    out = Poly.const(nvars(n), 0)
    for i in range(4 * n):
        out = out + coord(n, i) * coord(n, i)
    return out


@lru_cache(maxsize=None)
def omega_norm_sq(n: int) -> Poly:
    out = Poly.const(nvars(n), 0)
    for s in range(1, 4):
        v = coord(n, omega_index(n, s))
        out = out + v * v
    return out


@lru_cache(maxsize=None)
def base_P(n: int) -> Poly:
    """``P = (1+|q|^2)^2 + |omega|^2``."""
    a = q_norm_sq(n) + 1
    return a * a + omega_norm_sq(n)


def ps_const(c, n: int) -> PowerSum:
    return PowerSum.const(c, base_P(n))


def ps_coord(n: int, i: int) -> PowerSum:
    return PowerSum.poly(coord(n, i), base_P(n))


def ps_poly(p: Poly, n: int) -> PowerSum:
    return PowerSum.poly(p, base_P(n))


def ps_P_power(n: int, k: int, coeff=1) -> PowerSum:
    return PowerSum.base_power(k, base_P(n), coeff)
