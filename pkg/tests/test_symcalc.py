from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qcfs.symcalc import NotNormalizable, ParseError, Poly, PowerSum, base_P, eval_expr, parse, poly_divide_exact
from qcfs.symcalc.space import ps_P_power, var_names

N = 1
NV = 7
SYMS = sympy.symbols(var_names(N))


def to_sympy(p: Poly):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([s ** k for s, k in zip(SYMS, e)])
                for e, c in p.terms.items()), sympy.Integer(0))


def ps_to_sympy(f: PowerSum):
    return to_sympy(f.num) / to_sympy(f.base) ** f.power


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
monomials = st.tuples(*[st.integers(0, 2)] * NV)
polys = st.dictionaries(monomials, small, max_size=4).map(lambda d: Poly(NV, d))


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_ring_operations_match_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert sympy.expand(to_sympy(a + b) - to_sympy(a) - to_sympy(b)) == 0
    assert sympy.expand(to_sympy(a - b) - to_sympy(a) + to_sympy(b)) == 0


@settings(max_examples=20, deadline=None)
@given(polys, polys)
def test_exact_division_recovers_factor(a, b):
    if b.is_zero():
        return
    assert poly_divide_exact(a * b, b) == a


def test_division_by_zero_and_non_divisible():
    x = Poly.var(NV, 0)
    with pytest.raises(ZeroDivisionError):
        x.divmod(Poly.const(NV, 0))
    assert poly_divide_exact(x + 1, x) is None


def test_powersum_derivative_matches_sympy():
    P = base_P(N)
    f = PowerSum(Poly.var(NV, 1) * Poly.var(NV, 4) + 3, 2, P)
    for i in range(NV):
        got = ps_to_sympy(f.derive(i))
        want = sympy.diff(ps_to_sympy(f), SYMS[i])
        assert sympy.simplify(got - want) == 0


def test_normal_form_divides_out_the_base():
    P = base_P(N)
    f = PowerSum(P * P * Poly.var(NV, 0), 3, P)
    assert f.power == 1 and f.num == Poly.var(NV, 0)
    assert PowerSum(Poly.const(NV, 0), 4, P).power == 0
    assert (ps_P_power(N, -2) * ps_P_power(N, 2)) == PowerSum.const(1, P)


def test_negative_power_only_for_base_powers():
    P = base_P(N)
    assert ps_P_power(N, -2, 3) ** -1 == ps_P_power(N, 2, Fraction(1, 3))
    with pytest.raises(NotNormalizable):
        PowerSum.poly(Poly.var(NV, 0), P) ** -1


def test_exact_and_float_evaluation_agree():
    f = ps_P_power(N, -2, 64) * PowerSum.poly(Poly.var(NV, 2), base_P(N))
    pt = [Fraction(k, 5) for k in range(NV)]
    assert float(f.evaluate(pt)) == pytest.approx(float(f.evaluate_np(np.array([[float(c) for c in pt]]))[0]))


def test_parser_builds_expected_functions():
    P = base_P(N)
    assert eval_expr(parse("P^-3", N), N) == ps_P_power(N, -3)
    e = eval_expr(parse("2*t1 - x^2 + 1/2 + 0.5*y1", N), N)
    want = (Poly.var(NV, 0).scale(2) - Poly.var(NV, 4) * Poly.var(NV, 4) + Fraction(1, 2)
            + Poly.var(NV, 2).scale(Fraction(1, 2)))
    assert e == PowerSum.poly(want, P)
    assert eval_expr(parse("-(x1+y1)^2", N), N) == PowerSum.poly(-(Poly.var(NV, 1) + Poly.var(NV, 2)) ** 2, P)


@pytest.mark.parametrize("src, offset", [("P^-3 +", 6), ("x1 $ 2", 3), ("t2", 0), ("", 0), ("(x1", 3),
                                         ("é + 1", 0), ("x1 + é", 5)])
def test_parse_errors_report_byte_offsets(src, offset):
    with pytest.raises(ParseError) as info:
        parse(src, N)
    assert info.value.offset == offset
    assert f"byte offset {offset}" in str(info.value)
