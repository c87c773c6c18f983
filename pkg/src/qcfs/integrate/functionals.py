"""Integrals on the sphere and the group, and the quotients built from them."""

from __future__ import annotations

import math
import warnings

import numpy as np

from ..cayley import base_P_values, group_to_sphere, sphere_to_group
from ..frames import frame
from ..sampling import MeanEstimate, SphereRule, qmc_sphere_mean, rule_sum
from ..symcalc.poly import Poly
from ..symcalc.powersum import PowerSum
from ..symcalc.space import omega_norm_sq, q_norm_sq
from .measures import FunctionalReport, MeasureSpec, eta_volume, q_sphere_area, sphere_area_float
from .quadrature import QuadratureError, _panel, adaptive_square


class TailDivergence(QuadratureError):
    pass


def _two_star(n: int) -> float:
    return (2 * n + 3) / (n + 1)


def _Q(n: int) -> int:
    return 4 * n + 6


# ---- sphere ----------------------------------------------------------------

def sphere_means(f, n: int, samples: int, seed: int) -> MeanEstimate:
    """Uniform means of a (possibly vector-valued) function on ``S^{4n+3}``."""
    return qmc_sphere_mean(f, 4 * n + 4, samples, seed)


def integrate_sphere(f, n: int, samples: int = 1 << 20, seed: int = 42) -> FunctionalReport:
    """``int f Vol_eta~`` by randomized QMC."""
    est = sphere_means(f, n, samples, seed)
    vol = eta_volume(n)
    return FunctionalReport(float(est.mean) * vol, float(est.stderr) * vol, est.samples, seed, "qmc-sphere")


def center_of_mass(v, n: int, samples: int = 1 << 16, seed: int = 42):
    """``int zeta_j v Vol_eta~`` for all coordinates; returns ``(vector, stderr vector)``."""
    est = sphere_means(lambda S: S * np.asarray(v(S))[:, None], n, samples, seed)
    vol = eta_volume(n)
    return est.mean * vol, est.stderr * vol


def center_of_mass_rule(v, n: int, rule: SphereRule) -> np.ndarray:
    return rule_sum(lambda S: S * np.asarray(v(S))[:, None], rule) * eta_volume(n)


# ---- group: bi-radial quadrature ---------------------------------------------

def integrate_group_biradial(f, n: int, rtol: float = 1e-9) -> FunctionalReport:
    """``int f dH`` for ``f = f(rho, r)`` with ``rho = |q|``, ``r = |omega|``.

    Uses ``dH = area(S^{4n-1}) rho^{4n-1} d rho * 4 pi r^2 dr`` and the
    substitution ``rho = u/(1-u)``, ``r = v/(1-v)`` on the unit square.
    """
    c = q_sphere_area(n) * 4 * math.pi

    def g(u, v):
        rho = u / (1 - u)
        r = v / (1 - v)
        jac = 1 / ((1 - u) ** 2 * (1 - v) ** 2)
        return c * f(rho, r) * rho ** (4 * n - 1) * r ** 2 * jac

    try:
        res = adaptive_square(g, rtol=rtol)
    except QuadratureError as err:
        # refinement running into the corner at infinity usually means divergence
        _tail_check(g, _panel(g, 0.0, 1.0 - 1e-5, 0.0, 1.0 - 1e-5)[0])
        raise err
    _tail_check(g, res.value)
    return FunctionalReport(res.value, 0.0, res.evaluations, 0, "radial-2d")


def _tail_check(g, value: float, eps: float = 1e-5):
    edge = np.linspace(0.0, 1.0 - eps, 64)
    near = np.full_like(edge, 1.0 - eps)
    mass = eps * (np.max(np.abs(g(near, edge))) + np.max(np.abs(g(edge, near))))
    if not np.isfinite(mass) or mass > 1e-6 * max(abs(value), 1e-300):
        raise TailDivergence("integrand does not decay at infinity; the integral may diverge")


def biradial_points(rho, r, n: int) -> np.ndarray:
    rho, r = np.broadcast_arrays(np.asarray(rho, dtype=float), np.asarray(r, dtype=float))
    X = np.zeros(rho.shape + (4 * n + 3,))
    X[..., 0] = rho
    X[..., 4 * n] = r
    return X


def biradial_reduction(p: Poly, n: int) -> Poly | None:
    """Write ``p`` as ``R(|q|^2, |omega|^2)``; returns ``R`` in two variables or ``None``."""
    terms = {}
    for e, c in p.terms.items():
        a, b = e[0], e[4 * n]
        if any(k for i, k in enumerate(e) if i not in (0, 4 * n)):
            continue
        if a % 2 or b % 2:
            return None
        terms[(a // 2, b // 2)] = c
    R = Poly(2, terms)
    if R.compose([q_norm_sq(n), omega_norm_sq(n)]) != p:
        return None
    return R


def is_biradial(F: PowerSum, n: int) -> bool:
    return biradial_reduction(F.num, n) is not None and biradial_reduction(F.base, n) is not None


# ---- group: QMC through the Cayley map -------------------------------------

def integrate_group_qmc(f, n: int, samples: int = 1 << 20, seed: int = 42) -> FunctionalReport:
    """``int f dH`` with sphere points pulled back through the Cayley map.

    The round measure satisfies ``d sigma = 2^{4n+3} P^{-(2n+3)} dH``.
    """
    scale = sphere_area_float(n) / 2 ** (4 * n + 3)

    def h(S):
        G = sphere_to_group(S)
        return np.asarray(f(G)) * base_P_values(G) ** (2 * n + 3)

    est = sphere_means(h, n, samples, seed)
    return FunctionalReport(float(est.mean) * scale, float(est.stderr) * scale, est.samples, seed, "qmc-group")


# ---- Folland-Stein quotient ------------------------------------------------

def _measure(measure, n: int) -> MeasureSpec:
    if isinstance(measure, MeasureSpec):
        return measure
    return MeasureSpec(measure, n)


def _combine(num: float, den: float, c: float, n: int) -> float:
    e = (_Q(n) - 2) / _Q(n)
    return c * num / (c * den) ** e


def fs_quotient(F, measure="lebesgue", n: int | None = None, rtol: float = 1e-10,
                samples: int = 1 << 20, seed: int = 42) -> FunctionalReport:
    """``int |grad F|^2 d mu / (int |F|^{2*} d mu)^{2/2*}`` on the group.

    A bi-radial PowerSum goes through exact frame derivatives and the
    deterministic radial quadrature; anything else falls back to QMC.
    """
    if isinstance(F, PowerSum):
        n = (F.nvars - 3) // 4
    if n is None:
        raise ValueError("n is required for numeric functions")
    mu = _measure(measure, n)
    if not mu.on_group:
        raise ValueError("the Folland-Stein quotient lives on the group")
    c = float(mu.density)
    two_star = _two_star(n)
    if isinstance(F, PowerSum) and is_biradial(F, n):
        grad = frame(n).grad_sq(F)
        if not is_biradial(grad, n):
            raise AssertionError("gradient of a bi-radial function must be bi-radial")
        num = integrate_group_biradial(lambda a, b: grad.evaluate_np(biradial_points(a, b, n)), n, rtol)
        den = integrate_group_biradial(
            lambda a, b: np.abs(F.evaluate_np(biradial_points(a, b, n))) ** two_star, n, rtol)
        if den.value <= 0:
            raise ZeroDivisionError("the 2*-norm of F vanishes")
        return FunctionalReport(_combine(num.value, den.value, c, n), 0.0,
                                num.samples + den.samples, 0, "radial-2d")
    warnings.warn("function is not bi-radial; using QMC on the group", RuntimeWarning, stacklevel=2)
    if isinstance(F, PowerSum):
        fr = frame(n)
        grad_fn = lambda G: fr.grad_sq_values(F, G)  # noqa: E731
        val_fn = F.evaluate_np
    else:
        grad_fn = lambda G: frame(n).grad_sq_num(F, G)  # noqa: E731
        val_fn = F

    def both(S):
        G = sphere_to_group(S)
        w = base_P_values(G) ** (2 * n + 3)
        return np.stack([grad_fn(G) * w, np.abs(val_fn(G)) ** two_star * w], axis=-1)

    est = sphere_means(both, n, samples, seed)
    per = np.array([_combine(m[0], m[1], c * sphere_area_float(n) / 2 ** (4 * n + 3), n)
                    for m in est.replicates])
    scale = c * sphere_area_float(n) / 2 ** (4 * n + 3)
    value = _combine(est.mean[0], est.mean[1], scale, n)
    stderr = float(np.std(per, ddof=1) / math.sqrt(len(per)))
    return FunctionalReport(float(value), stderr, est.samples, seed, "qmc-group")


def fs_quotient_rule(F: PowerSum, rule: SphereRule, measure="lebesgue") -> FunctionalReport:
    """Quotient of an arbitrary decaying PowerSum with a sphere cubature rule.

    The numerator uses ``int |grad F|^2 = -int F lap F`` with the exact
    sub-Laplacian, whose pulled-back integrand stays bounded at the
    Cayley pole, unlike ``|grad F|^2`` itself.
    """
    n = (F.nvars - 3) // 4
    mu = _measure(measure, n)
    lap = frame(n).sublap(F)
    two_star = _two_star(n)

    def both(S):
        G = sphere_to_group(S)
        w = base_P_values(G) ** (2 * n + 3)
        f = F.evaluate_np(G)
        return np.stack([-f * lap.evaluate_np(G) * w, np.abs(f) ** two_star * w], axis=-1)

    sums = rule_sum(both, rule)
    scale = float(mu.density) * sphere_area_float(n) / 2 ** (4 * n + 3)
    return FunctionalReport(_combine(sums[0], sums[1], scale, n), 0.0, rule.size, 0, "cubature-sphere")


# ---- Yamabe functional on the sphere --------------------------------------

def transported_grad_sq(G, X: np.ndarray) -> np.ndarray:
    """``|grad^{eta~} g|^2`` at ``C^{-1}(X)`` from ``G = g o C^{-1}``: ``(P/8) |grad G|^2``."""
    n = (X.shape[-1] - 3) // 4
    if isinstance(G, PowerSum):
        gs = frame(n).grad_sq_values(G, X)
    else:
        gs = frame(n).grad_sq_num(G, X)
    return base_P_values(X) / 8 * gs


def yamabe_terms(g, n: int, G=None):
    """Integrand columns ``(|grad g|^2, g^2, |g|^{2*})`` on sphere points.

    ``G = g o C^{-1}`` may be an exact PowerSum or a numeric function of group
    points; its values and horizontal gradient are then used directly.
    Otherwise ``g`` is sampled and ``G`` is differenced numerically.
    """
    two_star = _two_star(n)
    if G is None:
        if g is None:
            raise ValueError("need g or G")

        def G(X):
            return g(group_to_sphere(X))

        values = None
    else:
        values = G.evaluate_np if isinstance(G, PowerSum) else G

    def terms(S):
        X = sphere_to_group(S)
        vals = values(X) if values is not None else g(S)
        return np.stack([transported_grad_sq(G, X), vals ** 2, np.abs(vals) ** two_star], axis=-1)

    return terms


def yamabe_from_means(m: np.ndarray, n: int, include_scalar: bool = True) -> float:
    """``E = Upsilon / N`` from means of ``yamabe_terms`` against the round probability measure."""
    a = 4 * (n + 2) / (n + 1)
    S = 8 * n * (n + 2)
    vol = eta_volume(n)
    ups = vol * (a * m[..., 0] + (S * m[..., 1] if include_scalar else 0.0))
    N = (vol * m[..., 2]) ** (2 / _two_star(n))
    return ups / N


def yamabe_sphere(g, n: int, samples: int = 1 << 20, seed: int = 42, G=None,
                  include_scalar: bool = True) -> FunctionalReport:
    """``Upsilon(g) / N(g)`` with gradients transported through the Cayley map.

    ``g`` is a function of flat sphere points (or ``None`` when ``G`` is an
    exact PowerSum); ``G = g o C^{-1}`` may be given exactly.
    """
    est = sphere_means(yamabe_terms(g, n, G), n, samples, seed)
    value = yamabe_from_means(est.mean, n, include_scalar)
    per = yamabe_from_means(est.replicates, n, include_scalar)
    stderr = float(np.std(per, ddof=1) / math.sqrt(len(per))) if len(per) > 1 else float("inf")
    return FunctionalReport(float(value), stderr, est.samples, seed, "qmc-sphere")


def dirichlet_sphere(g, n: int, samples: int, seed: int, G=None, include_scalar: bool = True):
    """``int (a|grad g|^2 + S~ g^2) Vol_eta~`` and ``int |g|^{2*} Vol_eta~`` with stderrs."""
    a = 4 * (n + 2) / (n + 1)
    S = 8 * n * (n + 2)
    vol = eta_volume(n)
    w = np.array([a, S if include_scalar else 0.0, 0.0])
    est = sphere_means(yamabe_terms(g, n, G), n, samples, seed)
    lhs = vol * est.replicates @ w
    nrm = vol * est.replicates[:, 2]
    R = len(lhs)
    return (float(np.mean(lhs)), float(np.std(lhs, ddof=1) / math.sqrt(R)),
            float(np.mean(nrm)), float(np.std(nrm, ddof=1) / math.sqrt(R)), est.samples)
