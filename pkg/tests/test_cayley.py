from fractions import Fraction

import numpy as np
import pytest

from qcfs.cayley import (
    CayleyDomainError,
    ConformalMap,
    RecenterError,
    SpherePoint,
    base_P_values,
    cayley,
    cayley_inv,
    coordinate_pullback,
    dilation_jacobian,
    group_to_sphere,
    map_from_ball,
    one_plus_p_norm_sq,
    phi,
    psi,
    psi_apply,
    psi_closed_form,
    psi_inverse_apply,
    psi_jacobian,
    pushed_center,
    pushforward_density,
    qmat_adjoint,
    qmat_identity,
    qmat_mul,
    recenter,
    rotation_to_pole,
    row_act,
    sphere_to_group,
    transfer_to_group,
    transfer_to_sphere,
)
from qcfs.frames import frame
from qcfs.heis import GroupPoint, from_siegel, to_siegel
from qcfs.integrate.measures import eta_volume
from qcfs.integrate.sphere_geometry import grad_sq_eta
from qcfs.quat import Quaternion
from qcfs.sampling import product_sphere_rule, rule_sum
from qcfs.symcalc.space import base_P


def random_sphere(rng, count, n=1):
    S = rng.normal(size=(count, 4 * n + 4))
    return S / np.linalg.norm(S, axis=1, keepdims=True)


def test_exact_cayley_lands_on_siegel_boundary_and_inverts():
    q = (Quaternion(Fraction(4, 9), Fraction(4, 9), 0, 0),)
    p = Quaternion(Fraction(4, 9), Fraction(-4, 9), Fraction(4, 9), Fraction(-1, 9))
    assert sum(Fraction(c) ** 2 for c in q[0].as_tuple()) + sum(c ** 2 for c in p.as_tuple()) == 1
    s = SpherePoint(q, p)
    c = cayley(s)
    assert c.defect() == 0
    assert cayley_inv(c) == s
    with pytest.raises(CayleyDomainError):
        cayley(SpherePoint((Quaternion(0),), Quaternion(-1)))
    with pytest.raises(ValueError):
        SpherePoint((Quaternion(1),), Quaternion(1))


def test_batched_maps_invert_each_other():
    rng = np.random.default_rng(0)
    for n in (1, 2):
        S = random_sphere(rng, 50, n)
        assert np.allclose(group_to_sphere(sphere_to_group(S)), S, atol=1e-12)
        G = rng.normal(size=(50, 4 * n + 3))
        assert np.allclose(sphere_to_group(group_to_sphere(G)), G, atol=1e-9)


def test_batched_map_matches_exact_chart():
    g = GroupPoint.from_flat([Fraction(k, 5) for k in (1, -2, 0, 3, 1, 1, -1)], 1)
    s = cayley_inv(to_siegel(g))
    assert from_siegel(cayley(s)) == g
    assert np.allclose(group_to_sphere(np.array([float(c) for c in g.flat()])),
                       s.to_array(), atol=1e-14)


def test_one_plus_p_norm_is_the_base_polynomial():
    for n in (1, 2):
        assert one_plus_p_norm_sq(n) == base_P(n)


def test_coordinate_pullbacks_match_map():
    rng = np.random.default_rng(1)
    G = rng.normal(size=(20, 7))
    S = group_to_sphere(G)
    for j in range(8):
        assert np.allclose(coordinate_pullback(j, 1).evaluate_np(G), S[:, j], atol=1e-12)


def test_transfer_round_trip_and_extremal_becomes_constant():
    rng = np.random.default_rng(2)
    G = rng.normal(size=(10, 7))
    g = transfer_to_sphere(phi(1), 1)
    assert np.allclose(g(group_to_sphere(G)), 1.0)
    F = transfer_to_group(lambda S: S[:, 0] ** 2 + 1, 1)
    assert np.allclose(transfer_to_sphere(F, 1)(group_to_sphere(G)), group_to_sphere(G)[:, 0] ** 2 + 1)


def test_transported_gradient_matches_sphere_finite_differences():
    rng = np.random.default_rng(3)
    X = rng.normal(scale=0.8, size=(200, 7))
    S = group_to_sphere(X)
    Z = coordinate_pullback(2, 1) * coordinate_pullback(5, 1)
    transported = base_P_values(X) / 8 * frame(1).grad_sq_values(Z, X)
    direct = grad_sq_eta(lambda T: T[..., 2] * T[..., 5], S)
    assert np.allclose(transported, direct, rtol=1e-6, atol=1e-9)


def test_rotation_to_pole_is_unitary_and_maps_center_to_pole():
    rng = np.random.default_rng(4)
    for n in (1, 2):
        for P in random_sphere(rng, 10, n):
            R = rotation_to_pole(P)
            assert np.max(np.abs(qmat_mul(R, qmat_adjoint(R)) - qmat_identity(n + 1))) < 1e-13
            pole = np.zeros(4 * n + 4)
            pole[0] = 1
            assert np.allclose(row_act(P, R), pole, atol=1e-13)


def test_psi_preserves_sphere_fixes_center_and_inverts():
    rng = np.random.default_rng(5)
    P = random_sphere(rng, 1)[0]
    m = psi(0.4, P)
    assert m.unitarity_defect() < 1e-13
    S = random_sphere(rng, 100)
    T = psi_apply(m, S)
    assert np.max(np.abs(np.linalg.norm(T, axis=1) - 1)) < 1e-10
    assert np.allclose(psi_apply(m, P[None, :]), P, atol=1e-12)
    assert np.allclose(psi_inverse_apply(m, T), S, atol=1e-9)
    with pytest.raises(ValueError):
        ConformalMap(qmat_identity(2), 1.5, P)


def test_closed_form_agrees_only_when_corrected():
    rng = np.random.default_rng(6)
    S = random_sphere(rng, 50)
    m = psi(0.6, np.eye(8)[0])
    conj = psi_apply(m, S)
    assert np.max(np.abs(psi_closed_form(0.6, S, corrected=True) - conj)) < 1e-12
    assert np.max(np.abs(psi_closed_form(0.6, S, corrected=False) - conj)) > 1e-2


def test_jacobian_matches_finite_difference_determinant():
    rng = np.random.default_rng(7)
    r = 0.7
    for s in random_sphere(rng, 5):
        # orthonormal tangent basis at s and its image under the map
        Q, _ = np.linalg.qr(np.column_stack([s, rng.normal(size=(8, 7))]))
        E = Q[:, 1:]
        t = psi_apply(psi(r, np.eye(8)[0]), s[None, :])[0]
        h = 1e-6
        cols = []
        for k in range(7):
            fp = psi_apply(psi(r, np.eye(8)[0]), (np.cos(h) * s + np.sin(h) * E[:, k])[None, :])[0]
            fm = psi_apply(psi(r, np.eye(8)[0]), (np.cos(h) * s - np.sin(h) * E[:, k])[None, :])[0]
            cols.append((fp - fm) / (2 * h))
        D = np.column_stack(cols)
        Qt, _ = np.linalg.qr(np.column_stack([t, rng.normal(size=(8, 7))]))
        det = abs(np.linalg.det(Qt[:, 1:].T @ D))
        assert det == pytest.approx(float(dilation_jacobian(s[None, :], r)[0]), rel=1e-6)


def test_pushforward_density_conserves_mass():
    rule = product_sphere_rule(8, 8, 8, seed=1)
    m = psi(0.9, np.eye(8)[3])
    v = lambda S: 1 + 0.3 * S[:, 0]  # noqa: E731
    w = pushforward_density(m, v)
    assert rule_sum(w, rule) == pytest.approx(1.0, rel=1e-6)
    assert np.allclose(psi_jacobian(psi(1.0, np.eye(8)[0]), np.eye(8)), 1.0)


def test_recenter_uniform_is_identity_and_bump_is_centred():
    n = 1
    vol = eta_volume(n)
    rule = product_sphere_rule(8, 5, 5, seed=0)
    res = recenter(lambda S: np.full(len(S), 1 / vol), n, 1e-6, rule=rule)
    assert res.map.r == 1.0 and res.evaluations == 1
    from qcfs.verify import bump_density

    v = bump_density(n, 2.0)
    res = recenter(v, n, 1e-6, rule=rule)
    assert res.residual <= 1e-6
    assert np.linalg.norm(pushed_center(res.map, v, rule, vol)) <= 1e-6
    assert 0 < res.map.r < 0.95
    assert abs(res.map.center[0]) > 0.99
    with pytest.raises(ValueError):
        recenter(v, n, 0.0, rule=rule)


def test_recenter_reports_best_residual_on_failure():
    rule = product_sphere_rule(8, 3, 3, seed=0)
    v = lambda S: np.exp(40 * S[:, 0])  # noqa: E731
    with pytest.raises(RecenterError) as info:
        recenter(v, 1, 1e-14, rule=rule, max_evaluations=5)
    assert info.value.best_residual > 0


def test_ball_parametrisation():
    m = map_from_ball(np.zeros(8))
    assert m.r == 1.0
    y = np.zeros(8)
    y[2] = 3.0
    m = map_from_ball(y)
    assert m.r == pytest.approx(0.25) and np.allclose(m.center, np.eye(8)[2])
