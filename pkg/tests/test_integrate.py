import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from qcfs.cayley import group_to_sphere, phi, transfer_to_sphere
from qcfs.constants import table
from qcfs.heis import dilate_fn
from qcfs.integrate import (
    FunctionalReport,
    MeasureSpec,
    QuadratureError,
    TailDivergence,
    adaptive_square,
    biradial_points,
    center_of_mass,
    eta_volume,
    fs_quotient,
    integrate_group_biradial,
    integrate_group_qmc,
    integrate_sphere,
    is_biradial,
    yamabe_sphere,
)
from qcfs.integrate.sphere_geometry import horizontal_basis, sublap_eta, vertical_frame
from qcfs.symcalc.space import ps_coord, ps_P_power

VOL1 = 64 * math.pi ** 4 / 3


def test_report_and_measure_validation():
    with pytest.raises(ValueError):
        FunctionalReport(1.0, -1.0, 10, 0, "qmc-sphere")
    with pytest.raises(ValueError):
        FunctionalReport(1.0, 0.0, 10, 0, "monte-carlo")
    with pytest.raises(ValueError):
        MeasureSpec("haar", 1)
    assert MeasureSpec("theta", 1).density == Fraction(1, 4)
    assert MeasureSpec("eta", 1).density == 64


def test_adaptive_square_against_closed_forms():
    r = adaptive_square(lambda u, v: np.exp(u + v), rtol=1e-12)
    assert r.value == pytest.approx((math.e - 1) ** 2, rel=1e-12)
    r = adaptive_square(lambda u, v: np.sqrt(u) * v, rtol=1e-8)
    assert r.value == pytest.approx(1 / 3, rel=1e-8)
    with pytest.raises(QuadratureError):
        adaptive_square(lambda u, v: 1 / (u - 0.5) ** 2, rtol=1e-12, max_panels=40)


def test_sphere_integrals():
    n = 1
    one = integrate_sphere(lambda S: np.ones(len(S)), n, 1 << 14, 1)
    assert one.value == pytest.approx(VOL1, rel=1e-12)
    assert eta_volume(n) == pytest.approx(VOL1, rel=1e-14)
    odd = integrate_sphere(lambda S: S[:, 3], n, 1 << 14, 1)
    assert abs(odd.value) <= 3 * odd.stderr
    sq = integrate_sphere(lambda S: S[:, 5] ** 2, n, 1 << 14, 1)
    assert abs(sq.value - VOL1 / 8) <= 3 * sq.stderr + 1e-9


def test_center_of_mass_signs():
    n = 1
    c, se = center_of_mass(lambda S: np.ones(len(S)), n, 1 << 14, 2)
    assert np.all(np.abs(c) <= 3 * se + 1e-9)
    c, _ = center_of_mass(lambda S: np.exp(4 * S[:, 0]), n, 1 << 14, 2)
    assert c[0] > 0 and c[0] > 10 * np.max(np.abs(c[1:]))


def test_biradial_quadrature_matches_group_qmc():
    n = 1
    Q = 10
    f = lambda rho, r: ((1 + rho ** 2) ** 2 + r ** 2) ** (-Q / 2)  # noqa: E731
    rad = integrate_group_biradial(f, n)
    qmc = integrate_group_qmc(lambda X: f(np.linalg.norm(X[:, :4], axis=1), np.linalg.norm(X[:, 4:], axis=1)),
                              n, 1 << 16, 3)
    assert rad.method == "radial-2d" and rad.stderr == 0.0
    assert qmc.value == pytest.approx(rad.value, rel=5e-3)


def test_biradial_compact_support_against_midpoint_rule():
    n = 1
    f = lambda rho, r: np.where(rho ** 2 + r ** 2 < 1, (1 - rho ** 2 - r ** 2) ** 3, 0.0)  # noqa: E731
    rad = integrate_group_biradial(f, n, rtol=1e-11).value
    # midpoint rule on the quarter disc in (rho, r), weight 2 pi^2 rho^3 * 4 pi r^2
    m = 2000
    x = (np.arange(m) + 0.5) / m
    R, W = np.meshgrid(x, x, indexing="ij")
    mid = np.sum(f(R, W) * 2 * math.pi ** 2 * R ** 3 * 4 * math.pi * W ** 2) / m ** 2
    assert rad == pytest.approx(mid, rel=1e-6)
    assert integrate_group_biradial(lambda a, b: 0 * a, n).value == 0.0
    with pytest.raises(TailDivergence):
        integrate_group_biradial(lambda a, b: np.ones_like(a), n)


def test_quotient_invariances():
    n = 1
    F = phi(n)
    base = fs_quotient(F).value
    for lam in (Fraction(1, 2), Fraction(3)):
        assert fs_quotient(dilate_fn(lam, F, n)).value == pytest.approx(base, rel=1e-8)
    assert fs_quotient(F.scale(7)).value == pytest.approx(base, rel=1e-12)
    theta = fs_quotient(F, "theta").value
    t = table(n)
    assert theta == pytest.approx(float(t.Lambda_Theta), rel=1e-9)
    with pytest.raises(ValueError):
        fs_quotient(F, "eta")


def test_non_biradial_function_falls_back_to_qmc_with_warning():
    n = 1
    F = ps_P_power(n, -2) * (ps_coord(n, 0) + 3)
    assert not is_biradial(F, n)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = fs_quotient(F, samples=1 << 14, seed=1)
    assert any("bi-radial" in str(w.message) for w in caught)
    assert rep.method == "qmc-group" and rep.value > float(table(n).Lambda_A)


def test_yamabe_of_constants_and_of_the_transferred_extremal():
    n = 1
    t = table(n)
    want = float(t.Stilde) * VOL1 ** (2 / t.Q)
    c = yamabe_sphere(lambda S: np.full(len(S), 3.0), n, 1 << 14, 4)
    assert c.value == pytest.approx(want, rel=1e-12)
    assert yamabe_sphere(lambda S: np.full(len(S), 0.2), n, 1 << 14, 4).value == pytest.approx(c.value, rel=1e-10)
    g = transfer_to_sphere(phi(n), n)
    e = yamabe_sphere(g, n, 1 << 14, 4)
    a_theta = float(t.a) * fs_quotient(phi(n), "theta").value
    assert abs(e.value - a_theta) <= max(3 * e.stderr, 1e-9 * a_theta)


def test_sphere_geometry_frames_and_coordinate_eigenvalue():
    rng = np.random.default_rng(0)
    S = rng.normal(size=(10, 8))
    S /= np.linalg.norm(S, axis=1, keepdims=True)
    V = vertical_frame(S)
    H = horizontal_basis(S)
    frame_all = np.concatenate([V, H], axis=1)
    gram = np.einsum("nij,nkj->nik", frame_all, frame_all)
    assert np.allclose(gram, np.eye(8)[None], atol=1e-12)
    for j in range(8):
        assert np.allclose(sublap_eta(lambda T: T[..., j], S), -2 * S[:, j], atol=1e-6)
    X = biradial_points(np.array([0.5]), np.array([0.3]), 1)
    assert np.allclose(group_to_sphere(X).shape, (1, 8))
