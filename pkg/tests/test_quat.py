from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcfs.quat import (
    Quaternion,
    from_array,
    is_imaginary,
    qconj,
    qinv,
    qinv_array,
    qmul,
    qmul_array,
    qnorm_sq,
    to_array,
)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
quats = st.builds(Quaternion, fracs, fracs, fracs, fracs)


def left_matrix(a):
    """Real 4x4 matrix of left multiplication, an independent route to the product."""
    w, x, y, z = a
    return np.array([[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]])


def test_hamilton_relations():
    i, j, k = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    minus_one = Quaternion(-1)
    assert qmul(i, i) == qmul(j, j) == qmul(k, k) == minus_one
    assert qmul(qmul(i, j), k) == minus_one
    assert qmul(i, j) == k and qmul(j, k) == i and qmul(k, i) == j
    assert qmul(j, i) == -k


@given(quats, quats)
def test_product_matches_left_multiplication_matrix(a, b):
    got = [float(c) for c in qmul(a, b).as_tuple()]
    want = left_matrix([float(c) for c in a.as_tuple()]) @ np.array([float(c) for c in b.as_tuple()])
    assert np.allclose(got, want, atol=1e-12)


@given(quats, quats, quats)
def test_associative_exact(a, b, c):
    assert qmul(qmul(a, b), c) == qmul(a, qmul(b, c))


@given(quats, quats)
def test_norm_is_multiplicative_and_conjugation_reverses(a, b):
    assert qnorm_sq(qmul(a, b)) == qnorm_sq(a) * qnorm_sq(b)
    assert qconj(qmul(a, b)) == qmul(qconj(b), qconj(a))


@given(quats)
def test_inverse_exact(a):
    if qnorm_sq(a) == 0:
        with pytest.raises(ZeroDivisionError):
            qinv(a)
    else:
        assert qmul(a, qinv(a)) == Quaternion(1)
        assert isinstance(qinv(a).re, Fraction)


def test_imaginary_predicate():
    assert is_imaginary(Quaternion(0, 1, 2, 3))
    assert not is_imaginary(Quaternion(Fraction(1, 3), 1))


def test_batched_product_and_inverse_agree_with_scalar_path():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(20, 4))
    B = rng.normal(size=(20, 4))
    C = qmul_array(A, B)
    for a, b, c in zip(A, B, C):
        assert np.allclose(to_array(qmul(from_array(a), from_array(b))), c)
    assert np.allclose(qmul_array(A, qinv_array(A)), np.tile([1.0, 0, 0, 0], (20, 1)))
    with pytest.raises(ZeroDivisionError):
        qinv_array(np.zeros((2, 4)))
