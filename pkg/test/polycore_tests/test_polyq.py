# Tests the exact polynomial type and the model parameters

import xlaguerre as XL
import numpy as np
import pytest
from fractions import Fraction

from xlaguerre.polycore import PolyQ, ModelParams, Family, parse_rational, rational_to_str, poly_eval, poly_diff, poly_add, poly_mul, poly_scale


def test_ring_operations():
    # Tests evaluation, derivative and arithmetic

    p = PolyQ([1, 2, 3])
    assert poly_eval(p, 2.0) == 17.0
    assert np.allclose(poly_eval(p, np.array([0.0, 1.0])), [1.0, 6.0], rtol=0.0, atol=1e-15)
    assert poly_diff(p) == PolyQ([2, 6])
    assert poly_add(p, PolyQ([-1, 0, -3])) == PolyQ([0, 2])
    assert poly_mul(PolyQ([1, 1]), PolyQ([1, -1])) == PolyQ([1, 0, -1])
    assert poly_scale(p, Fraction(1, 2)) == PolyQ([Fraction(1, 2), 1, Fraction(3, 2)])


def test_trailing_zeros():
    # Tests trailing zeros are trimmed and the zero polynomial has degree -1

    assert PolyQ([1, 0, 0]).degree() == 0
    assert PolyQ([0]).is_zero()
    assert PolyQ().degree() == -1


def test_immutable():
    # Tests PolyQ cannot be modified

    p = PolyQ([1, 2])
    with pytest.raises(AttributeError):
        p.foo = 1


def test_division_and_gcd():
    # Tests long division and the monic gcd

    a = PolyQ([2, -3, 1]) # (eta-1)(eta-2)
    b = PolyQ([-3, 2, 1]) # (eta-1)(eta+3)
    assert a.gcd(b) == PolyQ([-1, 1])
    quotient, remainder = (a*b).divmod(a)
    assert quotient == b
    assert remainder.is_zero()
    with pytest.raises(ArithmeticError):
        a.exact_div(PolyQ([1, 1]))


def test_count_positive_roots():
    # Tests the Sturm root count on the open half-line

    assert (PolyQ([2, -3, 1])*PolyQ([3, 1])).count_positive_roots() == 2
    assert PolyQ([1, 0, 1]).count_positive_roots() == 0
    assert PolyQ([0, 1]).count_positive_roots() == 0 # Only a zero at eta = 0
    assert PolyQ([2, -3, 1]).count_positive_roots() == 2


def test_parse_rational():
    # Tests "p/q" parsing

    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-2") == Fraction(-2)
    assert rational_to_str(Fraction(3, 6)) == "1/2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("1.5")
    with pytest.raises(ValueError):
        parse_rational("a/b")


def test_json():
    # Tests coefficients are exported as exact strings

    p = PolyQ([Fraction(1, 3), 0, -2])
    assert p.to_json() == {"coeffs" : ["1/3", "0/1", "-2/1"]}
    assert PolyQ.from_json(p.to_json()) == p


def test_model_params_ranges():
    # Tests the Darboux-Crum ranges and the other validations

    with pytest.raises(XL.ParameterRangeError):
        ModelParams(Family.L1, 1, Fraction(1, 2))
    with pytest.raises(XL.ParameterRangeError):
        ModelParams(Family.L2, 1, Fraction(-1, 2))
    with pytest.raises(XL.ParameterRangeError):
        ModelParams(Family.L1, 1, 1, omega=0.0)
    with pytest.raises(XL.ParameterRangeError):
        ModelParams(Family.L1, -1, 1)
    with pytest.raises(XL.ParameterRangeError):
        ModelParams("L3", 1, 1)

    # Inside the ranges
    assert ModelParams(Family.L2, 1, 0).g == 0
    assert ModelParams("l1", 1, "3/2").g == Fraction(3, 2)

    # The deformed-oscillator path only needs g > 0
    params = ModelParams(Family.L1, 1, Fraction(1, 2), check_dc_range=False)
    params.validate_oscillator_range()
    with pytest.raises(XL.ParameterRangeError):
        params.validate_dc_range()


def test_float_coupling():
    # Tests a float coupling selects the lower-trust path

    params = ModelParams(Family.L1, 1, 1.3)
    assert not params.exact
    assert not XL.exceptional_P(params, 2).exact
