from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qradial.exactnum import (
    Cyclo,
    CycloOrderError,
    cyclo_arith,
    cyclo_const,
    cyclo_embed,
    cyclo_inv,
    cyclo_root,
    cyclotomic_poly,
    euler_phi,
    format_cyclo,
    lift,
)

ORDERS = [1, 2, 3, 4, 5, 6, 8, 9, 12]
small_frac = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def cyclos(draw, order=None):
    m = order if order is not None else draw(st.sampled_from(ORDERS))
    deg = euler_phi(m)
    cs = draw(st.lists(small_frac, min_size=deg, max_size=deg))
    return Cyclo(m, cs)


@st.composite
def same_order_pair(draw):
    m = draw(st.sampled_from(ORDERS))
    return draw(cyclos(m)), draw(cyclos(m))


def num(x: Cyclo, d=40):
    return cyclo_embed(x, d).value


def test_cyclotomic_poly_matches_sympy():
    x = sympy.Symbol("x")
    for m in range(1, 31):
        ref = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_poly(m)) == [int(c) for c in ref]


def test_root_powers_reduce_mod_cyclotomic_polynomial():
    x = sympy.Symbol("x")
    for m in (5, 7, 9, 12, 15):
        phi = sympy.Poly(sympy.cyclotomic_poly(m, x), x)
        for j in range(2 * m):
            rem = sympy.rem(sympy.Poly(x ** j, x), phi)
            ref = rem.all_coeffs()[::-1]
            ref += [0] * (euler_phi(m) - len(ref))
            assert list(cyclo_root(m, j).coeffs) == [Fraction(int(c)) for c in ref]


def test_imaginary_unit_squares_to_minus_one():
    i = cyclo_root(4, 1)
    assert i * i == -1
    assert format_cyclo(4 * i) == "4·i"


def test_zeta3_minimal_relation():
    z = cyclo_root(3, 1)
    assert z * z + z + 1 == 0
    assert z ** 3 == 1


@given(same_order_pair())
def test_ring_axioms(pair):
    x, y = pair
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    assert x * (y + 1) == x * y + x


@settings(max_examples=60)
@given(cyclos())
def test_inverse(x):
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            cyclo_inv(x)
        return
    assert x * cyclo_inv(x) == 1
    assert 1 / x == cyclo_inv(x)


@settings(max_examples=60)
@given(same_order_pair())
def test_embedding_is_a_ring_homomorphism(pair):
    x, y = pair
    with mpmath.workdps(50):
        assert abs(num(x * y) - num(x) * num(y)) < mpmath.mpf(10) ** -30
        assert abs(num(x + y) - num(x) - num(y)) < mpmath.mpf(10) ** -30


@given(cyclos(), st.sampled_from([2, 3, 4]))
def test_lift_preserves_value_and_equality(x, factor):
    m = x.order * factor
    y = lift(x, m)
    assert y.order == m
    with mpmath.workdps(50):
        assert abs(num(y) - num(x)) < mpmath.mpf(10) ** -30
    assert y == x


def test_mismatched_orders_raise():
    with pytest.raises(CycloOrderError):
        cyclo_root(3, 1) + cyclo_root(4, 1)
    with pytest.raises(CycloOrderError):
        cyclo_arith(cyclo_root(3, 1), cyclo_root(5, 1), "mul")
    with pytest.raises(CycloOrderError):
        lift(cyclo_root(4, 1), 6)


def test_rational_promotion_and_extraction():
    x = cyclo_const(6, Fraction(3, 4)) + Fraction(1, 4)
    assert x.is_rational() and x.to_rational() == 1
    assert not cyclo_root(6, 1).is_rational()
    with pytest.raises(ValueError):
        cyclo_root(6, 1).to_rational()


def test_cyclo_is_immutable_and_unhashable():
    z = cyclo_root(5, 2)
    with pytest.raises(AttributeError):
        z.order = 7
    with pytest.raises(TypeError):
        hash(z)


def test_wrong_coefficient_count():
    with pytest.raises(ValueError):
        Cyclo(5, [1, 2])


def test_root_of_unity_embedding_value():
    v = num(cyclo_root(8, 1), 50)
    with mpmath.workdps(60):
        assert abs(v - mpmath.exp(2j * mpmath.pi / 8)) < mpmath.mpf(10) ** -50


def test_roots_have_exact_order():
    for m in range(1, 13):
        for j in range(m):
            assert cyclo_root(m, j) ** m == 1


def test_primitive_root_embeds_on_unit_circle():
    for m in (3, 7, 12, 24):
        v = num(cyclo_root(m, 1), 60)
        with mpmath.workdps(70):
            assert abs(abs(v) - 1) < mpmath.mpf(10) ** -55
