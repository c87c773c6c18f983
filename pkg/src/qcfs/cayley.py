"""Cayley transform between the sphere ``S^{4n+3}`` and the Siegel boundary.

Sphere points are stored p-slot first: flat arrays ``(p, q_1, ..., q_n)`` of
length ``4n+4``. Group points use the flat layout of :mod:`qcfs.heis`.

Sp(n+1) acts on the sphere from the right on row vectors, ``s -> s R``, so
that the quaternionic scalars in the Cayley formulas act on the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .heis import GroupPoint, SiegelPoint, from_siegel, sum_q_norm_sq, to_siegel
from .quat import (
    Quaternion,
    qconj,
    qconj_array,
    qinv,
    qinv_array,
    qmul,
    qmul_array,
    qnorm_sq,
)
from .symcalc.poly import Poly
from .symcalc.powersum import PowerSum
from .symcalc.space import base_P, coord, nvars, q_norm_sq


class CayleyDomainError(ValueError):
    pass


@dataclass(frozen=True)
class SpherePoint:
    q: tuple
    p: Quaternion

    def __post_init__(self):
        total = sum_q_norm_sq(self.q) + qnorm_sq(self.p)
        if isinstance(total, (int, Fraction)):
            if total != 1:
                raise ValueError("sphere point must satisfy |q|^2 + |p|^2 = 1")
        elif np.any(np.abs(np.asarray(total, dtype=float) - 1) > 1e-12):
            raise ValueError("sphere point must satisfy |q|^2 + |p|^2 = 1")

    @property
    def n(self) -> int:
        return len(self.q)

    @classmethod
    def pole(cls, n: int) -> "SpherePoint":
        return cls(tuple(Quaternion(0, 0, 0, 0) for _ in range(n)), Quaternion(1, 0, 0, 0))

    @classmethod
    def from_array(cls, arr) -> "SpherePoint":
        arr = np.asarray(arr, dtype=float)
        n = arr.shape[-1] // 4 - 1
        p = Quaternion(*np.moveaxis(arr[..., :4], -1, 0))
        q = tuple(Quaternion(*np.moveaxis(arr[..., 4 + 4 * a:8 + 4 * a], -1, 0)) for a in range(n))
        return cls(q, p)

    def to_array(self) -> np.ndarray:
        parts = [self.p] + list(self.q)
        return np.concatenate(
            [np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in x.as_tuple()]), axis=-1)
             for x in parts], axis=-1)


# ---- point maps ----------------------------------------------------------

def cayley(s: SpherePoint) -> SiegelPoint:
    """``q' = (1+p)^{-1} q``, ``p' = (1+p)^{-1} (1-p)``."""
    one_p = s.p + 1
    try:
        inv = qinv(one_p)
    except ZeroDivisionError:
        raise CayleyDomainError("the point (q, p) = (0, -1) has no Cayley image") from None
    return SiegelPoint(tuple(qmul(inv, qa) for qa in s.q), qmul(inv, 1 - s.p))


def cayley_inv(s: SiegelPoint) -> SpherePoint:
    """``q = 2 (1+p')^{-1} q'``, ``p = (1+p')^{-1} (1-p')``."""
    inv = qinv(s.p + 1)
    return SpherePoint(tuple(2 * qmul(inv, qa) for qa in s.q), qmul(inv, 1 - s.p))


def sphere_to_group(S: np.ndarray) -> np.ndarray:
    """Batched Cayley transform followed by the Siegel-to-group chart."""
    S = np.asarray(S, dtype=float)
    n = S.shape[-1] // 4 - 1
    one_p = S[..., :4].copy()
    one_p[..., 0] += 1.0
    nrm = np.sum(one_p ** 2, axis=-1, keepdims=True)
    if np.any(nrm == 0):
        raise CayleyDomainError("the point (q, p) = (0, -1) has no Cayley image")
    inv = qconj_array(one_p) / nrm
    out = np.empty(S.shape[:-1] + (4 * n + 3,))
    for a in range(n):
        out[..., 4 * a:4 * a + 4] = qmul_array(inv, S[..., 4 + 4 * a:8 + 4 * a])
    one_minus = -S[..., :4]
    one_minus[..., 0] += 1.0
    p_prime = qmul_array(inv, one_minus)
    out[..., 4 * n:] = -p_prime[..., 1:]
    return out


def group_to_sphere(G: np.ndarray) -> np.ndarray:
    """Inverse of :func:`sphere_to_group`."""
    G = np.asarray(G, dtype=float)
    n = (G.shape[-1] - 3) // 4
    qsq = np.sum(G[..., :4 * n] ** 2, axis=-1)
    one_p = np.empty(G.shape[:-1] + (4,))
    one_p[..., 0] = 1.0 + qsq
    one_p[..., 1:] = -G[..., 4 * n:]
    inv = qinv_array(one_p)
    out = np.empty(G.shape[:-1] + (4 * n + 4,))
    one_minus = np.empty_like(one_p)
    one_minus[..., 0] = 1.0 - qsq
    one_minus[..., 1:] = G[..., 4 * n:]
    out[..., :4] = qmul_array(inv, one_minus)
    for a in range(n):
        out[..., 4 + 4 * a:8 + 4 * a] = 2.0 * qmul_array(inv, G[..., 4 * a:4 * a + 4])
    return out


def base_P_values(G: np.ndarray) -> np.ndarray:
    """``P = (1+|q|^2)^2 + |omega|^2`` at flat group points."""
    G = np.asarray(G, dtype=float)
    n = (G.shape[-1] - 3) // 4
    qsq = np.sum(G[..., :4 * n] ** 2, axis=-1)
    return (1.0 + qsq) ** 2 + np.sum(G[..., 4 * n:] ** 2, axis=-1)


# ---- conformal factor ----------------------------------------------------

def conformal_h(s: SiegelPoint):
    """``h = |1+p'|^2 / 16``."""
    v = qnorm_sq(s.p + 1)
    return Fraction(v) / 16 if isinstance(v, (int, Fraction)) else v / 16


def phi(n: int) -> PowerSum:
    """``Phi = 8^{n+1} P^{-(n+1)}``."""
    return PowerSum.base_power(-(n + 1), base_P(n), 8 ** (n + 1))


def phi_values(G: np.ndarray) -> np.ndarray:
    n = (np.shape(G)[-1] - 3) // 4
    return (8.0 / base_P_values(G)) ** (n + 1)


def _poly_quaternions(n: int):
    N = nvars(n)
    zero = Poly.const(N, 0)
    q = [Quaternion(*(coord(n, 4 * a + c) for c in range(4))) for a in range(n)]
    w = Quaternion(zero, coord(n, 4 * n), coord(n, 4 * n + 1), coord(n, 4 * n + 2))
    return q, w


def cayley_inv_numerators(n: int) -> list:
    """Polynomials ``N_j`` with ``zeta_j o C^{-1} = N_j / P`` in sphere order."""
    q, w = _poly_quaternions(n)
    A = q_norm_sq(n)
    one_p = A + 1 - w          # 1 + p'
    one_m = 1 - A + w          # 1 - p'
    bar = qconj(one_p)
    p_num = qmul(bar, one_m)
    nums = list(p_num.as_tuple())
    for qa in q:
        nums += list((2 * qmul(bar, qa)).as_tuple())
    return nums


def coordinate_pullback(j: int, n: int) -> PowerSum:
    """Exact ``zeta_j o C^{-1}`` on the group; ``j = 0..3`` are the components of ``p``."""
    if not 0 <= j < 4 * n + 4:
        raise IndexError(f"sphere coordinate {j} out of range for n={n}")
    return PowerSum(cayley_inv_numerators(n)[j], 1, base_P(n))


def one_plus_p_norm_sq(n: int) -> Poly:
    """``|1+p'|^2`` as a polynomial in the group coordinates."""
    q, w = _poly_quaternions(n)
    return qnorm_sq(q_norm_sq(n) + 1 - w)


# ---- function transfer ---------------------------------------------------

def _as_callable(F):
    if isinstance(F, PowerSum):
        return F.evaluate_np
    return F


def transfer_to_sphere(F, n: int):
    """``g = (F / Phi) o C`` as a function of flat sphere points."""
    F = _as_callable(F)

    def g(S):
        G = sphere_to_group(S)
        return F(G) / phi_values(G)

    return g


def transfer_to_group(g, n: int):
    """``F = (g o C^{-1}) * Phi`` as a function of flat group points."""

    def F(G):
        G = np.asarray(G, dtype=float)
        return g(group_to_sphere(G)) * phi_values(G)

    return F


# ---- quaternionic matrices and the maps psi ------------------------------

def qmat_identity(m: int) -> np.ndarray:
    R = np.zeros((m, m, 4))
    R[np.arange(m), np.arange(m), 0] = 1.0
    return R


def qmat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.sum(qmul_array(A[:, :, None, :], B[None, :, :, :]), axis=1)


def qmat_adjoint(A: np.ndarray) -> np.ndarray:
    return qconj_array(np.swapaxes(A, 0, 1))


def row_act(S: np.ndarray, R: np.ndarray) -> np.ndarray:
    """``(s R)_j = sum_i s_i R_ij`` for flat sphere points ``S``."""
    S = np.asarray(S, dtype=float)
    m = R.shape[0]
    Sq = S.reshape(S.shape[:-1] + (m, 4))
    out = np.zeros_like(Sq)
    for i in range(m):
        for j in range(m):
            if np.any(R[i, j]):
                out[..., j, :] += qmul_array(Sq[..., i, :], R[i, j])
    return out.reshape(S.shape)


def rotation_to_pole(P: np.ndarray) -> np.ndarray:
    """Quaternionic-unitary ``R`` with ``P R = (1, 0, ..., 0)``.

    A diagonal phase first makes the p-slot real and non-negative, then a
    quaternionic Householder reflection moves the vector onto the pole.
    """
    P = np.asarray(P, dtype=float)
    m = P.shape[-1] // 4
    if abs(np.dot(P, P) - 1.0) > 1e-10:
        raise ValueError("rotation_to_pole needs a unit vector")
    D = qmat_identity(m)
    p0 = P[:4]
    r0 = np.linalg.norm(p0)
    if r0 > 0:
        D[0, 0] = qconj_array(p0) / r0
    v = row_act(P, D).reshape(m, 4)
    w = v.copy()
    w[0, 0] -= 1.0
    wn = np.sum(w ** 2)
    if wn < 1e-30:
        return D
    H = qmat_identity(m) - 2.0 * qmul_array(qconj_array(w)[:, None, :], w[None, :, :]) / wn
    return qmat_mul(D, H)


@dataclass(frozen=True)
class ConformalMap:
    """``psi_{r,P}``: rotate ``P`` to the pole, dilate by ``r`` in the group chart, rotate back."""

    rotation: np.ndarray
    r: float
    center: np.ndarray

    def __post_init__(self):
        if not 0 < self.r <= 1:
            raise ValueError("dilation factor r must lie in (0, 1]")

    @property
    def n(self) -> int:
        return self.rotation.shape[0] - 1

    def unitarity_defect(self) -> float:
        R = self.rotation
        E = qmat_mul(R, qmat_adjoint(R)) - qmat_identity(R.shape[0])
        return float(np.max(np.abs(E)))


def psi(r: float, P) -> ConformalMap:
    P = P.to_array() if isinstance(P, SpherePoint) else np.asarray(P, dtype=float)
    return ConformalMap(rotation_to_pole(P), float(r), P.copy())


def siegel_dilate_sphere(S: np.ndarray, r: float) -> np.ndarray:
    """``C^{-1} o delta_r o C`` on flat sphere points (pole-centred psi)."""
    if r == 1.0:
        return np.array(S, dtype=float)
    S = np.asarray(S, dtype=float)
    n = S.shape[-1] // 4 - 1
    G = sphere_to_group(S)
    G[..., :4 * n] *= r
    G[..., 4 * n:] *= r * r
    return group_to_sphere(G)


def psi_apply(m: ConformalMap, S) -> np.ndarray:
    """Apply ``psi`` to flat sphere points (or a SpherePoint)."""
    if isinstance(S, SpherePoint):
        S = S.to_array()
    S = np.asarray(S, dtype=float)
    if m.r == 1.0:
        return S.copy()
    moved = row_act(S, m.rotation)
    if np.any(np.abs(moved[..., 0] + 1.0) + np.linalg.norm(moved[..., 1:], axis=-1) < 1e-300):
        raise CayleyDomainError("psi is singular at the antipode of its centre")
    out = siegel_dilate_sphere(moved, m.r)
    return row_act(out, qmat_adjoint(m.rotation))


def psi_closed_form(r: float, S: np.ndarray, corrected: bool) -> np.ndarray:
    """Pole-centred ``psi_r`` from the explicit quaternion formula.

    ``p* = (1 + r^2 p')^{-1} (1 - r^2 p')`` with ``p' = (1+p)^{-1}(1-p)``.
    The q part is ``2r (1 + r^2 p')^{-1} X q`` where ``X = (1+p)^{-1}`` when
    ``corrected`` is true and ``X = 1+p`` otherwise (the latter is the form
    that is sometimes printed, and it is not the conjugated dilation).
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[-1] // 4 - 1
    p = S[..., :4]
    one_p = p.copy()
    one_p[..., 0] += 1.0
    one_m = -p
    one_m[..., 0] += 1.0
    pp = qmul_array(qinv_array(one_p), one_m)
    a = r * r * pp
    den = a.copy()
    den[..., 0] += 1.0
    num = -a
    num[..., 0] += 1.0
    inv_den = qinv_array(den)
    out = np.empty_like(S)
    out[..., :4] = qmul_array(inv_den, num)
    X = qinv_array(one_p) if corrected else one_p
    for k in range(n):
        qk = S[..., 4 + 4 * k:8 + 4 * k]
        out[..., 4 + 4 * k:8 + 4 * k] = 2 * r * qmul_array(inv_den, qmul_array(X, qk))
    return out


def group_point_to_sphere(g: GroupPoint) -> SpherePoint:
    return cayley_inv(to_siegel(g))


def sphere_point_to_group(s: SpherePoint) -> GroupPoint:
    return from_siegel(cayley(s))


def dilation_jacobian(S: np.ndarray, r: float) -> np.ndarray:
    """Round-measure Jacobian of ``C^{-1} o delta_r o C`` at flat sphere points.

    The round measure pulls back to ``2^{4n+3} P^{-(2n+3)} dH`` under the
    inverse Cayley map and ``delta_r`` scales ``dH`` by ``r^Q``.
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[-1] // 4 - 1
    G = sphere_to_group(S)
    Gr = G.copy()
    Gr[..., :4 * n] *= r
    Gr[..., 4 * n:] *= r * r
    return r ** (4 * n + 6) * (base_P_values(G) / base_P_values(Gr)) ** (2 * n + 3)


def psi_inverse_apply(m: ConformalMap, S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if m.r == 1.0:
        return S.copy()
    out = siegel_dilate_sphere(row_act(S, m.rotation), 1.0 / m.r)
    return row_act(out, qmat_adjoint(m.rotation))


def psi_jacobian(m: ConformalMap, S) -> np.ndarray:
    """``d(psi^* sigma) / d sigma`` at ``S``."""
    S = np.asarray(S, dtype=float)
    if m.r == 1.0:
        return np.ones(S.shape[:-1])
    return dilation_jacobian(row_act(S, m.rotation), m.r)


def pushforward_density(m: ConformalMap, v):
    """Density of ``psi_* (v sigma)`` against ``sigma``: ``v(psi^{-1} t) J_{psi^{-1}}(t)``."""
    if m.r == 1.0:
        return v

    def w(T):
        T = np.asarray(T, dtype=float)
        moved = row_act(T, m.rotation)
        back = row_act(siegel_dilate_sphere(moved, 1.0 / m.r), qmat_adjoint(m.rotation))
        return v(back) * dilation_jacobian(moved, 1.0 / m.r)

    return w


# ---- recentering -----------------------------------------------------------

class RecenterError(RuntimeError):
    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass(frozen=True)
class RecenterResult:
    map: ConformalMap
    residual: float
    evaluations: int


def map_from_ball(y: np.ndarray) -> ConformalMap:
    """``psi_{r,P}`` for an unconstrained vector: ``P = y/|y|``, ``r = 1/(1+|y|)``."""
    y = np.asarray(y, dtype=float)
    t = float(np.linalg.norm(y))
    if t == 0.0:
        P = np.zeros(len(y))
        P[0] = 1.0
        return ConformalMap(qmat_identity(len(y) // 4), 1.0, P)
    return psi(1.0 / (1.0 + t), y / t)


def pushed_center(m: ConformalMap, v, rule, volume: float) -> np.ndarray:
    """``int psi(s) v(s) Vol`` evaluated as the mean of the pushed-forward density."""
    from .sampling import rule_sum

    w = pushforward_density(m, v)
    return rule_sum(lambda T: T * np.asarray(w(T))[:, None], rule) * volume


def recenter(v, n: int, tol: float = 1e-6, rule=None, volume: float | None = None,
             max_evaluations: int = 400) -> RecenterResult:
    """Find ``psi_{r,P}`` with ``|int psi v Vol_eta~| <= tol`` for a normalised density ``v``.

    The unknown ``y`` parametrises the open ball ``(1-r) P``; the vector
    equation is solved with MINPACK's hybrid method on a fixed cubature
    rule, so the residual is a deterministic function of ``y``.
    """
    from scipy.optimize import root

    from .integrate.measures import eta_volume
    from .sampling import product_sphere_rule

    d = 4 * n + 4
    if tol <= 0:
        raise ValueError("tol must be positive")
    rule = rule if rule is not None else product_sphere_rule(d, 8, 8, seed=0)
    volume = eta_volume(n) if volume is None else volume
    best = {"res": np.inf, "y": np.zeros(d), "count": 0}

    def F(y):
        best["count"] += 1
        c = pushed_center(map_from_ball(y), v, rule, volume)
        r = float(np.linalg.norm(c))
        if r < best["res"]:
            best.update(res=r, y=np.array(y))
        return c

    F(np.zeros(d))
    if best["res"] <= tol:
        return RecenterResult(map_from_ball(best["y"]), best["res"], best["count"])
    sol = root(F, np.zeros(d), method="hybr", options={"xtol": 1e-13, "maxfev": max_evaluations})
    if best["res"] > tol:
        raise RecenterError("recentering did not reach the tolerance", best["res"])
    return RecenterResult(map_from_ball(best["y"]), best["res"], best["count"])
