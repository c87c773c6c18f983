import math

import numpy as np
import pytest

from qcfs.sampling import (
    NonFiniteIntegrand,
    ordered_map,
    product_sphere_rule,
    qmc_sphere_mean,
    replicate_seeds,
    rule_sum,
    sobol_sphere_points,
    worker_count,
)


def test_sobol_points_are_unit_and_shard_stable():
    full = sobol_sphere_points(8, 5, 0, 64)
    assert np.allclose(np.linalg.norm(full, axis=1), 1.0)
    assert np.array_equal(np.vstack([sobol_sphere_points(8, 5, 0, 32), sobol_sphere_points(8, 5, 32, 32)]), full)


def test_qmc_mean_of_polynomial_moments():
    est = qmc_sphere_mean(lambda S: np.stack([S[:, 0] ** 2, S[:, 1] * S[:, 2], S[:, 0] ** 4], axis=-1),
                          8, 1 << 14, 3)
    # exact moments on S^7: E[x^2] = 1/8, E[x y] = 0, E[x^4] = 3/(8*10)
    want = np.array([1 / 8, 0.0, 3 / 80])
    assert np.all(np.abs(est.mean - want) <= 5 * est.stderr + 1e-12)
    assert est.samples == 1 << 14 and est.replicates.shape == (16, 3)


def test_qmc_is_independent_of_worker_count(monkeypatch):
    f = lambda S: np.exp(S[:, 0])  # noqa: E731
    monkeypatch.setenv("QCFS_THREADS", "1")
    a = qmc_sphere_mean(f, 8, 1 << 16, 9)
    monkeypatch.setenv("QCFS_THREADS", "4")
    b = qmc_sphere_mean(f, 8, 1 << 16, 9)
    assert a.mean.tobytes() == b.mean.tobytes()
    assert a.stderr.tobytes() == b.stderr.tobytes()


def test_worker_count_validation(monkeypatch):
    monkeypatch.setenv("QCFS_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.setenv("QCFS_THREADS", "-1")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.setenv("QCFS_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count()
    monkeypatch.setenv("QCFS_THREADS", "2")
    assert ordered_map(lambda x: x * x, list(range(5))) == [0, 1, 4, 9, 16]


def test_non_finite_values_name_the_point():
    with pytest.raises(NonFiniteIntegrand, match="not finite at point"):
        qmc_sphere_mean(lambda S: np.where(S[:, 0] > 0.5, np.nan, 1.0), 4, 64, 1)


def test_seeds_are_deterministic():
    assert replicate_seeds(42, 4) == replicate_seeds(42, 4)
    assert len(set(replicate_seeds(42, 4))) == 4


@pytest.mark.parametrize("dim", [4, 6, 8])
def test_product_rule_integrates_polynomials_exactly(dim):
    rule = product_sphere_rule(dim, 3, 5, seed=2)
    assert math.isclose(float(np.sum(rule.weights)), 1.0, rel_tol=1e-13)
    assert np.allclose(np.linalg.norm(rule.points, axis=1), 1.0)
    second = rule_sum(lambda S: S[:, 0] ** 2, rule)
    fourth = rule_sum(lambda S: S[:, 1] ** 4, rule)
    assert second == pytest.approx(1 / dim, rel=1e-12)
    assert fourth == pytest.approx(3 / (dim * (dim + 2)), rel=1e-12)
    with pytest.raises(ValueError):
        product_sphere_rule(7, 3, 3)
