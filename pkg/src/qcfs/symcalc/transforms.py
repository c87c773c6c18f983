"""Exact group translations and dilations of PowerSums."""

from __future__ import annotations

from fractions import Fraction

from ..quat import Quaternion, qconj, qim, qmul
from .poly import Poly
from .powersum import PowerSum
from .space import coord, nvars


def _flat_quaternions(n: int):
    q = [Quaternion(*(coord(n, 4 * a + c) for c in range(4))) for a in range(n)]
    zero = Poly.const(nvars(n), 0)
    w = Quaternion(zero, coord(n, 4 * n), coord(n, 4 * n + 1), coord(n, 4 * n + 2))
    return q, w


def translation_substitution(h, n: int) -> list:
    """Polynomials giving the flat coordinates of ``h o g`` in terms of ``g``."""
    if h.n != n:
        raise ValueError("translation point has the wrong dimension")
    q, w = _flat_quaternions(n)
    h_q = [qa.map(Fraction) for qa in h.q]
    h_w = h.omega.map(Fraction)
    cross = Quaternion(0, 0, 0, 0)
    for a, b in zip(h_q, q):
        cross = cross + qmul(a, qconj(b))
    new_w = w + h_w + 2 * qim(cross)
    subs = []
    for a, b in zip(h_q, q):
        s = a + b
        subs += [_as_poly(c, n) for c in s.as_tuple()]
    subs += [_as_poly(c, n) for c in (new_w.im_i, new_w.im_j, new_w.im_k)]
    return subs


def _as_poly(c, n: int) -> Poly:
    return c if isinstance(c, Poly) else Poly.const(nvars(n), c)


def translate_powersum(f: PowerSum, h) -> PowerSum:
    n = (f.nvars - 3) // 4
    subs = translation_substitution(h, n)
    new_base = f.base.compose(subs)
    return PowerSum(f.num.compose(subs), f.power, new_base)


def dilate_powersum(f: PowerSum, lam: Fraction, n: int) -> PowerSum:
    factors = [lam] * (4 * n) + [lam * lam] * 3
    base = f.base.scale_vars(factors)
    num = f.num.scale_vars(factors).scale(lam ** (2 * n + 2))
    return PowerSum(num, f.power, base)
