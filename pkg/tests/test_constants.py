import math
from fractions import Fraction

import pytest

from qcfs.constants import (
    Exact,
    gamma_half_integer,
    htype_constant,
    second_variation_residual,
    sphere_area,
    table,
    table_identities,
)


def test_exact_arithmetic_is_structural():
    pi = Exact.pi()
    assert Exact.of(12) == Exact.of(Fraction(24, 2))
    assert (Exact.of(8) ** Fraction(1, 3)) == Exact.of(2)
    assert (pi ** 2 / pi) == pi
    assert Exact.of(Fraction(3, 4)).is_rational() and not pi.is_rational()
    assert Exact.of(-6).as_fraction() == -6
    assert float(Exact.of(2) ** Fraction(1, 2) * pi) == pytest.approx(math.sqrt(2) * math.pi, rel=1e-15)
    with pytest.raises(ValueError):
        Exact.of(0)
    with pytest.raises(ValueError):
        Exact.of(-2) ** Fraction(1, 2)


def test_gamma_values_and_duplication():
    assert gamma_half_integer(4) == Exact.of(6)
    assert gamma_half_integer(Fraction(1, 2)) == Exact.pi() ** Fraction(1, 2)
    assert gamma_half_integer(Fraction(5, 2)) == Exact.of(Fraction(3, 4)) * Exact.pi() ** Fraction(1, 2)
    z = Fraction(7, 2)
    lhs = gamma_half_integer(2 * z)
    rhs = (Exact.of(2) ** (2 * z - 1) * Exact.pi() ** Fraction(-1, 2)
           * gamma_half_integer(z) * gamma_half_integer(z + Fraction(1, 2)))
    assert lhs == rhs
    for k in (Fraction(1, 2), 3, Fraction(11, 2)):
        assert float(gamma_half_integer(k)) == pytest.approx(math.gamma(float(k)), rel=1e-14)
    with pytest.raises(ValueError):
        gamma_half_integer(Fraction(1, 3))


def test_table_values_for_n1():
    t = table(1)
    assert (t.Q, t.two_star, t.a, t.K, t.Stilde, t.lambda1) == (10, Fraction(5, 2), 6, 4, 24, 2)
    assert t.omega == Exact.pi() ** 4 / 3
    assert t.lambda_sphere == Exact.of(48) * (Exact.of(2) * t.omega) ** Fraction(1, 5)
    assert float(t.sphere_volume) == pytest.approx(64 * math.pi ** 4 / 3, rel=1e-15)
    assert t.Lambda_A / t.Lambda_B == Exact.of(2)
    assert t.adjudicated is None and t.with_adjudication("A").adjudicated == "A"
    with pytest.raises(ValueError):
        t.with_adjudication("C")


def test_sphere_area_matches_gamma_formula():
    for n in (1, 2, 3):
        d = 4 * n + 4
        assert float(sphere_area(n)) == pytest.approx(2 * math.pi ** (d / 2) / math.gamma(d / 2), rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_identities_hold_and_second_variation_vanishes(n):
    assert all(table_identities(table(n)).values())
    assert second_variation_residual(n) == 0
    assert second_variation_residual(n, 2 * n + 1) != 0


def test_htype_constant_float_value():
    n = 1
    N = 4 * n + 6
    direct = ((4 * n * (4 * n + 4)) ** -0.5 * 4 ** (3 / N) * math.pi ** (-(4 * n + 3) / (2 * N))
              * (math.gamma(4 * n + 3) / math.gamma((4 * n + 3) / 2)) ** (1 / N))
    assert float(htype_constant(n)) == pytest.approx(direct, rel=1e-14)
    assert f"{float(htype_constant(1)):.12g}" == "0.307337943967"


def test_json_has_exact_field_names():
    d = table(2).to_dict()
    assert list(d)[:-1] == list(table(2).FIELDS)
    assert d["K"] == 12 and d["Stilde"] == 64 and d["lambda1"] == 4
    with pytest.raises(ValueError):
        table(0)
