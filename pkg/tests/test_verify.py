import numpy as np
import pytest

from qcfs.frames import Frame
from qcfs.verify import (
    CheckReport,
    check_eigen_fd,
    check_extremal_quotient,
    check_invariance,
    check_minimality,
    check_second_variation,
    check_upsilon_zeta,
    check_volume,
    eigen_residual,
    minimality_scan,
    random_group_point,
    rule_nodes,
    run_exact,
    run_numeric,
    sublap_h_residual,
    yamabe_pde_residual,
)


def test_report_invariants_and_keys():
    with pytest.raises(ValueError):
        CheckReport("x", 1, "pass", None, None, 1.0, 0.0)
    with pytest.raises(ValueError):
        CheckReport("x", 1, "maybe", None, None, 0.0, 0.0)
    r = CheckReport("x", 1, "pass", np.float64(1.0), None, np.float32(0.0), 0.0, elapsed=0.5)
    assert type(r.lhs) is float and type(r.residual) is float
    assert list(r.to_dict()) == ["check-id", "n", "status", "lhs", "rhs", "residual", "tolerance", "samples", "seed"]
    assert r.to_dict(timing=True)["elapsed"] == 0.5
    assert CheckReport("x", 1, "adjudicated-B", 1.0, 2.0, 5.0, 0.0).passed


@pytest.mark.parametrize("n", [1, 2])
def test_exact_checks_pass_with_controls_caught(n):
    reports = run_exact(n)
    assert [r.check_id for r in reports] == ["sublap-h", "yamabe-pde", "eigenfunctions",
                                             "second-variation", "table-identities"]
    for r in reports:
        assert r.status == "pass" and r.residual == 0 and r.tolerance == 0
        assert all(caught for _, caught in r.controls)


def test_exact_residuals_detect_wrong_inputs():
    assert sublap_h_residual(1) == 0
    assert sublap_h_residual(1, Frame(1, overrides=((("T", 1), 3),))) > 0
    assert yamabe_pde_residual(1) == 0
    assert yamabe_pde_residual(1, 5) > 0
    assert eigen_residual(1, 2) == 0
    assert eigen_residual(1, 2, square=True) > 0


def test_second_variation_for_larger_n():
    for n in range(1, 6):
        assert check_second_variation(n).passed


def test_unknown_checks_are_rejected():
    with pytest.raises(KeyError):
        run_exact(1, "nope")
    with pytest.raises(KeyError):
        run_numeric(1, 1024, 1, "nope")


def test_volume_and_invariance_at_small_sample_counts():
    assert check_volume(1, 1 << 12, 3).passed
    for perturbed in (False, True):
        reps = check_invariance(1, 1 << 14, 3, perturbed=perturbed)
        for r in reps if isinstance(reps, list) else [reps]:
            assert r.passed, r


def test_extremal_quotient_adjudicates():
    r = check_extremal_quotient(1)
    assert r.status == "adjudicated-A"
    assert r.lhs == pytest.approx(24.32224347423781, rel=1e-9)


def test_minimality_scan_small():
    res = minimality_scan(1, 4, 1 << 12, 5)
    assert np.all(res.increments > 0)
    assert res.homogeneity <= 1e-12
    assert np.all(res.support > 0)
    assert check_minimality(1, 1 << 12, 5, directions=10).passed
    with pytest.raises(ValueError):
        check_minimality(1, 1 << 12, 5, directions=4)


def test_upsilon_zeta_and_finite_difference_eigenfunction():
    assert check_upsilon_zeta(1, 1 << 14, 7).passed
    assert check_eigen_fd(1, 7, points=5).passed


def test_helpers_are_deterministic():
    assert random_group_point(1, 4) == random_group_point(1, 4)
    assert rule_nodes(1, 1 << 20) == 8
    assert rule_nodes(1, 10) == 3
