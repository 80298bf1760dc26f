# Tests the rational functions in eta and the closed-form functions built on them

import numpy as np
import pytest
import scipy.special as sspec
from fractions import Fraction

from xlaguerre.polycore import PolyQ, laguerre
from xlaguerre.structured import RationalQ, StructuredFn, evaluate_polynomial, common_denominator


def test_rational_reduction():
    # Tests common factors cancel and the denominator is made monic

    R = RationalQ(PolyQ([-1, 0, 1]), PolyQ([-2, 2]))
    assert R.den == PolyQ([1])
    assert R.num == PolyQ([Fraction(1, 2), Fraction(1, 2)])
    assert R == RationalQ(PolyQ([1, 1]))*Fraction(1, 2)


def test_rational_zero_denominator():
    # Tests a zero denominator is rejected

    with pytest.raises(ZeroDivisionError):
        RationalQ(PolyQ([1]), PolyQ([0]))


def test_rational_arithmetic():
    # Tests sums, products and derivatives of rational functions

    A = RationalQ(PolyQ([1]), PolyQ([1, 1]))   # 1/(1+eta)
    B = RationalQ(PolyQ([0, 1]), PolyQ([1, 1])) # eta/(1+eta)
    assert A+B == 1
    assert (A*B).den == PolyQ([1, 2, 1])
    assert A.diff() == RationalQ(PolyQ([-1]), PolyQ([1, 2, 1]))
    assert B.times_eta(-1) == A
    assert abs(A(3.0)-0.25) < 1e-15


def test_common_denominator():
    # Tests terms are brought over their least common denominator

    terms = [RationalQ(PolyQ([1]), PolyQ([1, 1])), RationalQ(PolyQ([1]), PolyQ([2, 1]))]
    numerators, common = common_denominator(terms)
    assert common == PolyQ([2, 3, 1])
    assert numerators[0] == PolyQ([2, 1])
    assert numerators[1] == PolyQ([1, 1])


def test_high_degree_evaluation():
    # Tests high-degree exact polynomials are evaluated accurately for large eta

    eta = np.linspace(0.0, 80.0, 41)
    values = evaluate_polynomial(laguerre(24, 0), eta)
    expected = sspec.eval_laguerre(24, eta)
    assert np.allclose(values, expected, rtol=1e-9, atol=1e-9)


def test_derivative():
    # Tests d/dx of simple closed forms

    # d/dx x^2 = 2x
    f = StructuredFn(0, 2, RationalQ(PolyQ([1])))
    assert abs(f.derivative().evaluate(1.5, 1.0)-3.0) < 1e-14

    # d/dx exp(-omega x^2/2) = -omega x exp(-omega x^2/2)
    f = StructuredFn(-1, 0, RationalQ(PolyQ([1])))
    assert abs(f.derivative().evaluate(1.0, 2.0)+2.0*np.exp(-1.0)) < 1e-14


def test_derivative_matches_finite_difference():
    # Tests the exact derivative against a central difference

    f = StructuredFn(-1, Fraction(3, 2), RationalQ(PolyQ([1, 2]), PolyQ([3, 1])))
    x = np.linspace(0.3, 3.0, 10)
    h = 1e-5
    omega = 1.7
    numerical = (f.evaluate(x+h, omega)-f.evaluate(x-h, omega))/(2.0*h)
    assert np.allclose(f.derivative().evaluate(x, omega), numerical, rtol=0.0, atol=1e-8)


def test_square_integrability():
    # Tests square-integrability is read off the structure

    one = RationalQ(PolyQ([1]))
    assert StructuredFn(-1, 0, one).is_square_integrable()
    assert not StructuredFn(-1, -1, one).is_square_integrable()
    assert not StructuredFn(1, 2, one).is_square_integrable()
    assert not StructuredFn(0, -1, one).is_square_integrable()
    assert StructuredFn(-1, -1, RationalQ(PolyQ([0, 1]))).is_square_integrable() # x^-1 * eta ~ x


def test_proportionality():
    # Tests omega-independent proportionality across even power gaps

    f = StructuredFn(-1, 2, RationalQ(PolyQ([1])))
    g = StructuredFn(-1, 0, RationalQ(PolyQ([0, 1])), C=3.0)
    assert f.is_proportional_to(g)
    assert not f.is_proportional_to(StructuredFn(-1, 1, RationalQ(PolyQ([1]))))
    assert not f.is_proportional_to(StructuredFn(-1, 0, RationalQ(PolyQ([1, 1]))))


def test_sign_near_zero():
    # Tests the sign as x -> 0+

    assert StructuredFn(-1, 1, RationalQ(PolyQ([-2, 1]))).sign_near_zero() == -1
    assert StructuredFn(-1, 1, RationalQ(PolyQ([0, 3]), PolyQ([-1, 1]))).sign_near_zero() == -1
    assert StructuredFn(-1, 1, RationalQ(PolyQ([2, -1])), C=-1.0).sign_near_zero() == -1
