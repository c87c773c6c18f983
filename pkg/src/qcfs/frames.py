"""Left-invariant frame of the quaternionic Heisenberg group.

Horizontal fields, for ``alpha = 1..n``::

    T = d/dt_a + 2x_a d/dx + 2y_a d/dy + 2z_a d/dz
    X = d/dx_a - 2t_a d/dx - 2z_a d/dy + 2y_a d/dz
    Y = d/dy_a + 2z_a d/dx - 2t_a d/dy - 2x_a d/dz
    Z = d/dz_a - 2y_a d/dx + 2x_a d/dy - 2t_a d/dz

and vertical fields ``xi_s = 2 d/d(x, y, z)_s``. Each field is stored as a
list of ``(target variable, coefficient, source variable or None)`` triples,
meaning ``coefficient * source`` times the partial in ``target``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .symcalc.poly import Poly
from .symcalc.powersum import PowerSum
from .symcalc.space import coord, nvars, omega_index, q_index


@dataclass(frozen=True)
class FrameFieldId:
    kind: str  # "T", "X", "Y", "Z" or "xi"
    index: int

    def __post_init__(self):
        if self.kind not in ("T", "X", "Y", "Z", "xi"):
            raise ValueError(f"unknown frame field kind {self.kind!r}")
        if self.kind == "xi" and not 1 <= self.index <= 3:
            raise ValueError("vertical field index must be 1..3")
        if self.kind != "xi" and self.index < 1:
            raise ValueError("horizontal field index must be >= 1")

    def __str__(self):
        return f"{self.kind}{self.index}"


# (vertical slot s in 1..3, coefficient, q component 0..3) for each horizontal kind
_TABLE = {
    "T": [(1, 2, 1), (2, 2, 2), (3, 2, 3)],
    "X": [(1, -2, 0), (2, -2, 3), (3, 2, 2)],
    "Y": [(1, 2, 3), (2, -2, 0), (3, -2, 1)],
    "Z": [(1, -2, 2), (2, 2, 1), (3, -2, 0)],
}
_OWN = {"T": 0, "X": 1, "Y": 2, "Z": 3}


@dataclass(frozen=True)
class Frame:
    """The frame for a fixed ``n``; ``overrides`` replaces table coefficients.

    ``overrides`` maps ``(kind, vertical slot)`` to a new coefficient and only
    exists to build deliberately wrong frames for sensitivity controls.
    """

    n: int
    overrides: tuple = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def terms(self, fid: FrameFieldId) -> list:
        n = self.n
        if fid.kind == "xi":
            return [(omega_index(n, fid.index), Fraction(2), None)]
        if not 1 <= fid.index <= n:
            raise ValueError(f"field index {fid.index} out of range for n={n}")
        ov = dict(self.overrides)
        a = fid.index
        out = [(q_index(a, _OWN[fid.kind]), Fraction(1), None)]
        for s, c, comp in _TABLE[fid.kind]:
            c = ov.get((fid.kind, s), c)
            out.append((omega_index(n, s), Fraction(c), q_index(a, comp)))
        return out

    def horizontal(self) -> list:
        return [FrameFieldId(k, a) for a in range(1, self.n + 1) for k in "TXYZ"]

    def vertical(self) -> list:
        return [FrameFieldId("xi", s) for s in (1, 2, 3)]

    # ---- exact path ------------------------------------------------
    def apply(self, fid: FrameFieldId, f: PowerSum) -> PowerSum:
        out = None
        for target, c, src in self.terms(fid):
            d = f.derive(target)
            if d.is_zero():
                continue
            factor = Poly.const(nvars(self.n), c)
            if src is not None:
                factor = factor * coord(self.n, src)
            term = d * factor
            out = term if out is None else out + term
        if out is None:
            return PowerSum.const(0, f.base)
        return out

    def grad_sq(self, f: PowerSum) -> PowerSum:
        out = PowerSum.const(0, f.base)
        for fid in self.horizontal():
            d = self.apply(fid, f)
            out = out + d * d
        return out

    def grad_inner(self, f: PowerSum, g: PowerSum) -> PowerSum:
        out = PowerSum.const(0, f.base if f.power else g.base)
        for fid in self.horizontal():
            out = out + self.apply(fid, f) * self.apply(fid, g)
        return out

    def grad_sq_values(self, f: PowerSum, X: np.ndarray) -> np.ndarray:
        """Float values of ``|grad f|^2`` from exact first derivatives.

        Avoids expanding the squares symbolically, which is much cheaper
        when only point values are needed.
        """
        out = 0.0
        for fid in self.horizontal():
            out = out + self.apply(fid, f).evaluate_np(X) ** 2
        return out

    def sublap(self, f: PowerSum) -> PowerSum:
        out = PowerSum.const(0, f.base)
        for fid in self.horizontal():
            out = out + self.apply(fid, self.apply(fid, f))
        return out

    # ---- numeric path ----------------------------------------------
    def direction(self, fid: FrameFieldId, g: np.ndarray) -> np.ndarray:
        """Coefficient vector of the field at points ``g`` of shape ``(..., 4n+3)``."""
        g = np.asarray(g, dtype=float)
        v = np.zeros_like(g)
        for target, c, src in self.terms(fid):
            v[..., target] += float(c) * (g[..., src] if src is not None else 1.0)
        return v

    def apply_num(self, fid: FrameFieldId, u, g: np.ndarray, step: float | None = None) -> np.ndarray:
        """Central difference of ``u`` along the field at ``g``.

        The integral curves of every frame field are straight lines, so one
        difference along the coefficient vector is exact up to O(step^2).
        """
        g = np.asarray(g, dtype=float)
        v = self.direction(fid, g)
        h = _step(g, step)
        fp = _finite(u(g + h[..., None] * v), g)
        fm = _finite(u(g - h[..., None] * v), g)
        return (fp - fm) / (2 * h)

    def grad_sq_num(self, u, g: np.ndarray, step: float | None = None) -> np.ndarray:
        out = 0.0
        for fid in self.horizontal():
            out = out + self.apply_num(fid, u, g, step) ** 2
        return out

    def sublap_num(self, u, g: np.ndarray, step: float | None = None) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        h = _step(g, step)
        u0 = _finite(u(g), g)
        out = 0.0
        for fid in self.horizontal():
            v = self.direction(fid, g)
            fp = _finite(u(g + h[..., None] * v), g)
            fm = _finite(u(g - h[..., None] * v), g)
            out = out + (fp - 2 * u0 + fm) / h ** 2
        return out


def _step(g: np.ndarray, step: float | None) -> np.ndarray:
    if step is not None:
        if step <= 0:
            raise ValueError("step must be positive")
        return np.full(g.shape[:-1], float(step))
    return 1e-4 * (1.0 + np.max(np.abs(g), axis=-1))


def _finite(vals, g):
    vals = np.asarray(vals, dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        where = np.argwhere(bad)[0]
        raise FloatingPointError(f"non-finite function value near point {g[tuple(where)]}")
    return vals


_DEFAULT: dict = {}


def frame(n: int) -> Frame:
    if n not in _DEFAULT:
        _DEFAULT[n] = Frame(n)
    return _DEFAULT[n]


def vf_apply(fid: FrameFieldId, f: PowerSum, n: int) -> PowerSum:
    return frame(n).apply(fid, f)


def h_grad_sq(f: PowerSum, n: int) -> PowerSum:
    return frame(n).grad_sq(f)


def sublap(f: PowerSum, n: int) -> PowerSum:
    return frame(n).sublap(f)


def vf_apply_num(fid: FrameFieldId, u, g, n: int, step: float | None = None):
    return frame(n).apply_num(fid, u, g, step)


def sublap_num(u, g, n: int, step: float | None = None):
    return frame(n).sublap_num(u, g, step)
