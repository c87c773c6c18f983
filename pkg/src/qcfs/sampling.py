"""Deterministic point sets on the sphere ``S^{4n+3}`` and sharded reductions.

Two families are provided:

* randomized quasi-Monte-Carlo: independent scrambled Sobol replicates,
  mapped to the sphere through the inverse normal CDF and normalisation;
  the spread of replicate means gives the standard error;
* a product cubature in complex coordinates ``z_k = sqrt(tau_k) e^{i theta_k}``
  with Gauss-Jacobi stick-breaking for the simplex variables ``tau`` and
  trapezoidal phases, optionally rotated by a seeded Haar rotation.

Work is cut into fixed shards whose partial sums are reduced in shard order,
so results do not depend on the number of worker threads.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri, roots_jacobi
from scipy.stats import qmc, special_ortho_group

SHARD_SIZE = 1 << 14
DEFAULT_REPLICATES = 16


def worker_count() -> int:
    """Worker threads from ``QCFS_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("QCFS_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"QCFS_THREADS must be an integer, got {raw!r}") from None
    if k < 0:
        raise ValueError("QCFS_THREADS must be >= 0")
    return k or (os.cpu_count() or 1)


def ordered_map(fn, tasks: list) -> list:
    """Map ``fn`` over ``tasks`` with the configured workers, keeping task order."""
    workers = min(worker_count(), max(1, len(tasks)))
    if workers == 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


class NonFiniteIntegrand(FloatingPointError):
    pass


def check_finite(vals: np.ndarray, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(vals, dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.flatnonzero(bad.ravel())[0])
        raise NonFiniteIntegrand(f"integrand is not finite at point {pts.reshape(-1, pts.shape[-1])[i]}")
    return vals


# ---- randomized QMC --------------------------------------------------------

def replicate_seeds(seed: int, count: int) -> list:
    ss = np.random.SeedSequence(seed & ((1 << 64) - 1))
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(count)]


def sobol_sphere_points(dim: int, seed: int, start: int, count: int) -> np.ndarray:
    """Points ``start .. start+count-1`` of one scrambled Sobol stream, on ``S^{dim-1}``."""
    eng = qmc.Sobol(dim, scramble=True, seed=seed)
    if start:
        eng.fast_forward(start)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        u = eng.random(count)
    u = np.clip(u, 1e-300, 1 - 2 ** -53)
    x = ndtri(u)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@dataclass(frozen=True)
class MeanEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    samples: int
    replicates: np.ndarray  # per-replicate means, shape (R, ...)


def qmc_sphere_mean(f, dim: int, samples: int, seed: int,
                    replicates: int = DEFAULT_REPLICATES) -> MeanEstimate:
    """Uniform-measure mean of ``f`` over ``S^{dim-1}``.

    ``f`` maps an ``(N, dim)`` array to ``(N,)`` or ``(N, k)`` values.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    R = max(1, min(replicates, samples))
    per = samples // R
    seeds = replicate_seeds(seed, R)
    tasks = [(r, s, min(SHARD_SIZE, per - s)) for r in range(R) for s in range(0, per, SHARD_SIZE)]

    def run(task):
        r, start, count = task
        pts = sobol_sphere_points(dim, seeds[r], start, count)
        vals = check_finite(f(pts), pts)
        return np.sum(vals, axis=0)

    partial = ordered_map(run, tasks)
    sums = [0.0] * R
    for (r, _, _), v in zip(tasks, partial):
        sums[r] = sums[r] + v
    means = np.array([s / per for s in sums])
    mean = np.mean(means, axis=0)
    stderr = np.std(means, axis=0, ddof=1) / math.sqrt(R) if R > 1 else np.full_like(mean, np.inf)
    return MeanEstimate(mean, stderr, R * per, means)


# ---- product cubature ------------------------------------------------------

@dataclass(frozen=True)
class SphereRule:
    points: np.ndarray
    weights: np.ndarray  # sums to one

    @property
    def size(self) -> int:
        return len(self.weights)


def _beta_nodes(k: int, count: int):
    """Gauss nodes/weights for the density ``(1-x)^(k-1)`` on ``[0, 1]``."""
    t, w = roots_jacobi(count, k - 1, 0)
    return (1 + t) / 2, w / np.sum(w)


def product_sphere_rule(dim: int, nodes: int, phases: int, seed: int | None = None) -> SphereRule:
    """Product cubature for the normalised round measure on ``S^{dim-1}``.

    ``dim`` must be even. ``seed`` selects a Haar rotation of the whole rule.
    """
    if dim % 2:
        raise ValueError("product rule needs an even ambient dimension")
    m = dim // 2
    # stick-breaking: x_i ~ Beta(1, m-1-i) for i = 0..m-2
    taus = [np.ones(1)]
    wts = np.ones(1)
    for i in range(m - 1):
        x, w = _beta_nodes(m - 1 - i, nodes)
        rest = taus[-1]
        new = [t[:, None] * np.ones(len(x)) for t in taus[:-1]]
        new.append(rest[:, None] * x[None, :])
        new.append(rest[:, None] * (1 - x)[None, :])
        taus = [t.ravel() for t in new]
        wts = (wts[:, None] * w[None, :]).ravel()
    tau = np.stack(taus, axis=-1)
    theta = 2 * np.pi * np.arange(phases) / phases
    grids = np.meshgrid(*([theta] * m), indexing="ij")
    ang = np.stack([g.ravel() for g in grids], axis=-1)
    amp = np.sqrt(np.clip(tau, 0.0, None))
    re = amp[:, None, :] * np.cos(ang)[None, :, :]
    im = amp[:, None, :] * np.sin(ang)[None, :, :]
    pts = np.empty((len(tau), len(ang), dim))
    pts[..., 0::2] = re
    pts[..., 1::2] = im
    pts = pts.reshape(-1, dim)
    weights = np.repeat(wts, len(ang)) / len(ang)
    if seed is not None:
        rot = special_ortho_group(dim, seed=seed).rvs()
        pts = pts @ rot.T
    return SphereRule(pts, weights)


def rule_sum(f, rule: SphereRule) -> np.ndarray:
    """Weighted sum of ``f`` over a rule, in fixed shards reduced in order."""
    n = rule.size
    bounds = [(s, min(n, s + SHARD_SIZE)) for s in range(0, n, SHARD_SIZE)]

    def run(b):
        pts = rule.points[b[0]:b[1]]
        vals = check_finite(f(pts), pts)
        w = rule.weights[b[0]:b[1]]
        return np.tensordot(w, vals, axes=(0, 0))

    total = 0.0
    for part in ordered_map(run, bounds):
        total = total + part
    return np.asarray(total)
