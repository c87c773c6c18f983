"""Horizontal calculus on the round sphere ``S^{4n+3}`` for the form ``eta~``.

The vertical space at ``s`` is spanned by ``i s, j s, k s`` (left scalar
multiplication), the horizontal space is the orthogonal complement of
``s`` and the vertical space. The metric attached to ``eta~`` is twice the
round metric on horizontal vectors, so squared gradients and the
sub-Laplacian are half of their round-metric counterparts.
"""

from __future__ import annotations

import numpy as np

from ..quat import qmul_array

_UNITS = np.eye(4)[1:]


def vertical_frame(S: np.ndarray) -> np.ndarray:
    """Orthonormal ``(s, i s, j s, k s)`` with shape ``(..., 4, 4n+4)``."""
    S = np.asarray(S, dtype=float)
    m = S.shape[-1] // 4
    Sq = S.reshape(S.shape[:-1] + (m, 4))
    vecs = [S]
    for u in _UNITS:
        vecs.append(qmul_array(u, Sq).reshape(S.shape))
    return np.stack(vecs, axis=-2)


def horizontal_projector(S: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the horizontal space, shape ``(..., d, d)``."""
    V = vertical_frame(S)
    d = V.shape[-1]
    return np.eye(d) - np.einsum("...ki,...kj->...ij", V, V)


def horizontal_basis(S: np.ndarray) -> np.ndarray:
    """Orthonormal horizontal basis ``(..., 4n, 4n+4)`` via an eigen-decomposition of the projector."""
    Pi = horizontal_projector(S)
    w, U = np.linalg.eigh(Pi)
    d = Pi.shape[-1]
    return np.swapaxes(U[..., :, 4:], -1, -2) if d > 4 else np.zeros(S.shape[:-1] + (0, d))


def _radial(g):
    def ext(X):
        return g(X / np.linalg.norm(X, axis=-1, keepdims=True))
    return ext


def grad_sq_round_h(g, S: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """``|pi_H grad g|^2`` for the round metric, by central differences."""
    S = np.asarray(S, dtype=float)
    d = S.shape[-1]
    ext = _radial(g)
    grad = np.empty_like(S)
    for k in range(d):
        e = np.zeros(d)
        e[k] = step
        grad[..., k] = (ext(S + e) - ext(S - e)) / (2 * step)
    hg = np.einsum("...ij,...j->...i", horizontal_projector(S), grad)
    return np.sum(hg ** 2, axis=-1)


def grad_sq_eta(g, S: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """``|grad^{eta~} g|^2`` on the sphere."""
    return 0.5 * grad_sq_round_h(g, S, step)


def sublap_eta(g, S: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """Sub-Laplacian of ``eta~`` from second differences along horizontal great circles."""
    S = np.asarray(S, dtype=float)
    B = horizontal_basis(S)
    g0 = g(S)
    out = np.zeros(S.shape[:-1])
    c, s = np.cos(step), np.sin(step)
    for a in range(B.shape[-2]):
        e = B[..., a, :]
        out += (g(c * S + s * e) - 2 * g0 + g(c * S - s * e)) / step ** 2
    return 0.5 * out
