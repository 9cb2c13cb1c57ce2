import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncluster import scalar
from ncluster.errors import NotInvertible, TowerMismatch
from ncluster.scalar import (
    QI, QJ, QK, Dual, Matrix, Quaternion, Rational,
    from_json, invert, lift, mul, one, random_scalar, random_invertible, to_json, zero,
)

fracs = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 8))


def rationals():
    return fracs.map(Rational)


def quaternions():
    return st.tuples(fracs, fracs, fracs, fracs).map(lambda t: Quaternion(*t))


def mat2(level_draw):
    return st.tuples(level_draw, level_draw, level_draw, level_draw).map(
        lambda t: Matrix(((t[0], t[1]), (t[2], t[3]))))


def duals():
    return st.tuples(quaternions(), quaternions()).map(lambda t: Dual(*t))


any_scalar = st.one_of(rationals(), quaternions(), mat2(rationals()), duals())


def test_quaternion_table():
    assert QI * QJ == QK
    assert QJ * QK == QI
    assert QK * QI == QJ
    assert QJ * QI == -QK
    assert QI * QI == -1


def test_dual_mul_matches_poly_mod_eps2():
    # (2 + 3 eps)(5 + eps) via polynomial multiplication mod eps^2
    a, b, c, d = Fraction(2), Fraction(3), Fraction(5), Fraction(1)
    prod = Dual(Rational(a), Rational(b)) * Dual(Rational(c), Rational(d))
    assert prod == Dual(Rational(a * c), Rational(a * d + b * c))
    assert prod == Dual(Rational(10), Rational(17))


def test_identity_matrix_mul():
    m = Matrix(((Rational(1), Rational(2)), (Rational(3), Rational(4))))
    assert one(m.level()) * m == m
    assert m * one(m.level()) == m


def test_quaternion_one_plus_i_inverse():
    # oracle: conjugate / reduced norm
    q = Quaternion(1, 1, 0, 0)
    qinv = invert(q)
    n = q.norm()
    oracle = Quaternion(q.w / n, -q.x / n, -q.y / n, -q.z / n)
    assert qinv == oracle
    assert qinv == Quaternion(Fraction(1, 2), Fraction(-1, 2), 0, 0)
    assert q * qinv == 1 and qinv * q == 1


def test_dual_inverse():
    d = Dual(Rational(2), Rational(3))
    dinv = invert(d)
    assert dinv == Dual(Rational(Fraction(1, 2)), Rational(Fraction(-3, 4)))
    assert d * dinv == Dual(Rational(1), Rational(0))


def test_zero_not_invertible():
    with pytest.raises(NotInvertible):
        invert(Rational(0))
    with pytest.raises(NotInvertible):
        invert(Quaternion(0, 0, 0, 0))
    with pytest.raises(NotInvertible):
        invert(Matrix(((Rational(1), Rational(2)), (Rational(2), Rational(4)))))
    with pytest.raises(NotInvertible):
        invert(Dual(Rational(0), Rational(5)))


def test_tower_mismatch():
    with pytest.raises(TowerMismatch):
        mul(Rational(1), Quaternion(1, 0, 0, 0))
    with pytest.raises(TowerMismatch):
        Rational(1) + Dual(Rational(1), Rational(0))


def test_central_lift():
    assert Quaternion(1, 0, 0, 0) + 1 == Quaternion(2, 0, 0, 0)
    assert 2 * Matrix(((Rational(1), Rational(0)), (Rational(0), Rational(1)))) \
        == Matrix(((Rational(2), Rational(0)), (Rational(0), Rational(2))))
    assert lift(Fraction(3, 2), ("dual", ("rat",))) == Dual(Rational(Fraction(3, 2)), Rational(0))


@settings(max_examples=150, deadline=None)
@given(any_scalar, any_scalar, any_scalar)
def test_associativity_and_distributivity(x, y, z):
    if not (x.level() == y.level() == z.level()):
        return
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


@settings(max_examples=100, deadline=None)
@given(quaternions(), quaternions())
def test_quaternion_antihomomorphism(a, b):
    if a.is_zero() or b.is_zero():
        return
    assert invert(a * b) == invert(b) * invert(a)


@settings(max_examples=60, deadline=None)
@given(any_scalar)
def test_two_sided_inverse(x):
    try:
        xi = invert(x)
    except NotInvertible:
        return
    assert x * xi == one(x.level())
    assert xi * x == one(x.level())


def test_dual_directional_derivative_of_inverse():
    # f(t) = (1+t)^{-1}; infinitesimal part at a + eps b is -(1+a)^{-1} b (1+a)^{-1}
    rng = random.Random(5)
    for _ in range(20):
        a = random_invertible("quat", rng=rng)
        b = random_scalar("quat", rng=rng)
        val = invert(Dual(a, b) + 1)
        g = invert(a + 1)
        assert val.base == g
        assert val.inf == -(g * b * g)


def test_random_scalar_contract():
    x = random_scalar("rat", seed=1, bound=10)
    assert isinstance(x, Rational)
    assert abs(x.value.numerator) <= 10 and x.value.denominator <= 10
    assert random_scalar("quat", seed=1) == random_scalar("quat", seed=1)
    m = random_invertible("mat:2", seed=7, bound=5)
    assert invert(m) * m == one(m.level())


def test_matrix_of_quaternions_inverse():
    rng = random.Random(3)
    m = random_invertible("mat:2:quat", rng=rng)
    assert m * invert(m) == one(m.level())


def test_matrix_of_matrix_inverse_by_flattening():
    rng = random.Random(11)
    m = random_invertible("mat:2:mat:2", rng=rng)
    assert invert(m) * m == one(m.level())


def test_json_round_trip():
    vals = [
        Rational(Fraction(-3, 4)),
        Quaternion(1, 0, Fraction(-1, 2), 0),
        Matrix(((Rational(1), Rational(0)), (Rational(0), Rational(1)))),
        Dual(Rational(2), Rational(-1)),
        random_scalar("mat:2:quat", seed=2),
    ]
    for v in vals:
        assert from_json(to_json(v)) == v


def test_dual_nested_for_second_derivatives():
    # nested duals support d^2 of t -> t^{-1}: second derivative 2 a^{-3}
    a = Rational(Fraction(3, 2))
    d1 = Dual(Dual(a, Rational(1)), Dual(Rational(1), Rational(0)))
    v = invert(d1)
    second = v.inf.inf
    assert second == Rational(2 * Fraction(2, 3) ** 3)
