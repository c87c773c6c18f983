"""Quaternion arithmetic over a pluggable scalar.

The scalar can be anything supporting ``+ - *`` (``Fraction``, ``float``,
numpy arrays for batched evaluation, or :class:`qcfs.symcalc.Poly`).
Division only happens in :func:`qinv`, which needs ``/`` on the scalar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

Rational = Fraction


@dataclass(frozen=True)
class Quaternion:
    re: Any
    im_i: Any = 0
    im_j: Any = 0
    im_k: Any = 0

    # make numpy defer to our reflected operators instead of building object arrays
    __array_ufunc__ = None

    @classmethod
    def from_seq(cls, seq) -> "Quaternion":
        w, x, y, z = seq
        return cls(w, x, y, z)

    def as_tuple(self) -> tuple:
        return (self.re, self.im_i, self.im_j, self.im_k)

    def map(self, fn) -> "Quaternion":
        return Quaternion(fn(self.re), fn(self.im_i), fn(self.im_j), fn(self.im_k))

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion(other, 0, 0, 0)
        return Quaternion(self.re + other.re, self.im_i + other.im_i,
                          self.im_j + other.im_j, self.im_k + other.im_k)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.re, -self.im_i, -self.im_j, -self.im_k)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        return Quaternion(self.re * other, self.im_i * other,
                          self.im_j * other, self.im_k * other)

    def __rmul__(self, other):
        # scalars are real, hence central
        return Quaternion(other * self.re, other * self.im_i,
                          other * self.im_j, other * self.im_k)

    def __truediv__(self, scalar):
        return Quaternion(self.re / scalar, self.im_i / scalar,
                          self.im_j / scalar, self.im_k / scalar)

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion(other, 0, 0, 0)
        pairs = zip(self.as_tuple(), other.as_tuple())
        return all(bool(np.all(a == b)) for a, b in pairs)

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return f"Quaternion({self.re!r}, {self.im_i!r}, {self.im_j!r}, {self.im_k!r})"


ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b``."""
    a0, a1, a2, a3 = a.as_tuple()
    b0, b1, b2, b3 = b.as_tuple()
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def qconj(a: Quaternion) -> Quaternion:
    return Quaternion(a.re, -a.im_i, -a.im_j, -a.im_k)


def qnorm_sq(a: Quaternion):
    return a.re * a.re + a.im_i * a.im_i + a.im_j * a.im_j + a.im_k * a.im_k


def qim(a: Quaternion) -> Quaternion:
    return Quaternion(0 * a.re, a.im_i, a.im_j, a.im_k)


def qinv(a: Quaternion) -> Quaternion:
    n = qnorm_sq(a)
    if not isinstance(n, np.ndarray) and n == 0:
        raise ZeroDivisionError("zero quaternion has no inverse")
    if isinstance(n, np.ndarray) and np.any(n == 0):
        raise ZeroDivisionError("zero quaternion has no inverse")
    return qconj(a) / n


def is_imaginary(a: Quaternion, tol: float = 0.0) -> bool:
    if tol == 0.0:
        return bool(np.all(a.re == 0))
    return bool(np.all(np.abs(a.re) <= tol))


def to_float(a: Quaternion) -> Quaternion:
    return a.map(float)


def to_array(a: Quaternion) -> np.ndarray:
    """Stack components along a trailing axis of length 4."""
    return np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in a.as_tuple()]), axis=-1)


def from_array(arr: np.ndarray) -> Quaternion:
    arr = np.asarray(arr)
    return Quaternion(arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3])


# ---- batched helpers on arrays with a trailing axis of 4 -------------------

def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays ``(..., 4)`` with broadcasting."""
    a0, a1, a2, a3 = np.moveaxis(np.asarray(a, dtype=float), -1, 0)
    b0, b1, b2, b3 = np.moveaxis(np.asarray(b, dtype=float), -1, 0)
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def qconj_array(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def qinv_array(a: np.ndarray) -> np.ndarray:
    n = np.sum(np.asarray(a, dtype=float) ** 2, axis=-1, keepdims=True)
    if np.any(n == 0):
        raise ZeroDivisionError("zero quaternion has no inverse")
    return qconj_array(a) / n
