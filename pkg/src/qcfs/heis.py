"""The quaternionic Heisenberg group ``G = H^n x Im H`` and its Siegel model.

Points carry quaternion components that may be exact rationals, floats or
numpy arrays (a batch of points sharing one ``GroupPoint``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .quat import Quaternion, from_array, qconj, qim, qmul, qnorm_sq, to_array


class DimensionMismatch(ValueError):
    pass


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class GroupPoint:
    q: tuple
    omega: Quaternion

    def __post_init__(self):
        if not self.q:
            raise ValueError("a group point needs n >= 1 quaternion coordinates")
        re = self.omega.re
        if _is_exact(re):
            if re != 0:
                raise ValueError("omega must be purely imaginary")
        elif np.any(np.abs(np.asarray(re, dtype=float)) > 1e-12):
            raise ValueError("omega must be purely imaginary")

    @property
    def n(self) -> int:
        return len(self.q)

    @classmethod
    def identity(cls, n: int) -> "GroupPoint":
        return cls(tuple(Quaternion(0, 0, 0, 0) for _ in range(n)), Quaternion(0, 0, 0, 0))

    @classmethod
    def from_array(cls, arr, n: int | None = None) -> "GroupPoint":
        """Build from flat coordinates ``(t1,x1,y1,z1,...,x,y,z)`` along the last axis."""
        arr = np.asarray(arr, dtype=float)
        m = arr.shape[-1]
        if (m - 3) % 4 or m < 7:
            raise ValueError(f"flat group coordinates must have length 4n+3, got {m}")
        n = (m - 3) // 4 if n is None else n
        q = tuple(from_array(arr[..., 4 * a:4 * a + 4]) for a in range(n))
        w = arr[..., 4 * n:]
        return cls(q, Quaternion(np.zeros_like(w[..., 0]), w[..., 0], w[..., 1], w[..., 2]))

    @classmethod
    def from_flat(cls, coords, n: int) -> "GroupPoint":
        """Exact construction from a flat sequence of rationals."""
        coords = list(coords)
        if len(coords) != 4 * n + 3:
            raise DimensionMismatch(f"expected {4 * n + 3} coordinates, got {len(coords)}")
        q = tuple(Quaternion(*coords[4 * a:4 * a + 4]) for a in range(n))
        x, y, z = coords[4 * n:]
        return cls(q, Quaternion(0, x, y, z))

    def to_array(self) -> np.ndarray:
        parts = [to_array(qa) for qa in self.q]
        parts.append(to_array(self.omega)[..., 1:])
        return np.concatenate(parts, axis=-1)

    def flat(self) -> list:
        out = []
        for qa in self.q:
            out += list(qa.as_tuple())
        return out + [self.omega.im_i, self.omega.im_j, self.omega.im_k]


@dataclass(frozen=True)
class SiegelPoint:
    q: tuple
    p: Quaternion

    @property
    def n(self) -> int:
        return len(self.q)

    def defect(self):
        """``Re p' - |q'|^2``; zero on the Siegel boundary."""
        return self.p.re - sum_q_norm_sq(self.q)

    def check(self, tol: float = 1e-10) -> None:
        d = self.defect()
        if _is_exact(d):
            if d != 0:
                raise ValueError("point is not on the Siegel boundary: Re p' != |q'|^2")
        elif np.any(np.abs(np.asarray(d, dtype=float)) > tol * (1 + np.abs(np.asarray(self.p.re, dtype=float)))):
            raise ValueError("point is not on the Siegel boundary: Re p' != |q'|^2")


def sum_q_norm_sq(q: tuple):
    out = 0
    for qa in q:
        out = out + qnorm_sq(qa)
    return out


def _check_same_n(a, b):
    if a.n != b.n:
        raise DimensionMismatch(f"points of dimension n={a.n} and n={b.n}")


def group_mul(g0: GroupPoint, g: GroupPoint) -> GroupPoint:
    """``(q0, w0) o (q, w) = (q0 + q, w + w0 + 2 Im(q0 . conj(q)))``."""
    _check_same_n(g0, g)
    cross = Quaternion(0, 0, 0, 0)
    for a, b in zip(g0.q, g.q):
        cross = cross + qmul(a, qconj(b))
    w = g.omega + g0.omega + 2 * qim(cross)
    return GroupPoint(tuple(a + b for a, b in zip(g0.q, g.q)), w)


def group_inv(g: GroupPoint) -> GroupPoint:
    return GroupPoint(tuple(-a for a in g.q), -g.omega)


def dilate(lam, g: GroupPoint) -> GroupPoint:
    if lam <= 0:
        raise ValueError("dilation factor must be positive")
    return GroupPoint(tuple(lam * a for a in g.q), (lam * lam) * g.omega)


def homogeneous_dim(n: int) -> int:
    return 4 * n + 6


def to_siegel(g: GroupPoint) -> SiegelPoint:
    """``(q, w) -> (q, |q|^2 - w)``."""
    return SiegelPoint(g.q, sum_q_norm_sq(g.q) - g.omega)


def from_siegel(s: SiegelPoint, tol: float = 1e-10) -> GroupPoint:
    s.check(tol)
    w = qim(s.p)
    return GroupPoint(s.q, -w)


# ---- functions on the group --------------------------------------------

def translate_fn(h: GroupPoint, u):
    """Left translate ``u o tau_h``; ``u`` is a PowerSum or a callable on flat arrays."""
    from .symcalc.powersum import PowerSum

    if isinstance(u, PowerSum):
        from .symcalc.transforms import translate_powersum

        return translate_powersum(u, h)
    h_arr = h.to_array()
    n = h.n

    def moved(x):
        x = np.asarray(x, dtype=float)
        g = GroupPoint.from_array(x, n)
        hb = GroupPoint.from_array(np.broadcast_to(h_arr, x.shape), n)
        return u(group_mul(hb, g).to_array())

    return moved


def dilate_fn(lam, u, n: int):
    """``u_lam = lam^((Q-2)/2) * u o delta_lam``."""
    if lam <= 0:
        raise ValueError("dilation factor must be positive")
    from .symcalc.powersum import PowerSum

    if isinstance(u, PowerSum):
        from .symcalc.transforms import dilate_powersum

        return dilate_powersum(u, Fraction(lam), n)
    scale = float(lam) ** ((homogeneous_dim(n) - 2) / 2)
    factors = np.array([float(lam)] * (4 * n) + [float(lam) ** 2] * 3)

    def scaled(x):
        return scale * u(np.asarray(x, dtype=float) * factors)

    return scaled
