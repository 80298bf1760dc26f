# Tests the exceptional X_l Laguerre polynomials

import xlaguerre as XL
import pytest
from fractions import Fraction

from xlaguerre.polycore import laguerre, deforming_xi, exceptional_P, Family, ModelParams, HALF


def test_seed_polynomial():
    # Tests P_{l,0} = xi_l(eta;g+1) coefficient-wise

    for family in [Family.L1, Family.L2]:
        for ell in [1, 2, 3]:
            for g in [Fraction(1), Fraction(3, 2), Fraction(5, 2)]:
                params = ModelParams(family, ell, g)
                assert exceptional_P(params, 0) == deforming_xi(params.shifted(1))


def test_degree():
    # Tests deg P_{l,n} = l+n

    for family in [Family.L1, Family.L2]:
        for ell in [1, 2, 3]:
            for g in [Fraction(1), Fraction(3, 2), Fraction(5, 2)]:
                params = ModelParams(family, ell, g)
                for n in range(6):
                    assert exceptional_P(params, n).degree() == ell+n


def test_first_excited_L1():
    # Tests P_{1,1} for L1 with g = 1

    params = ModelParams(Family.L1, 1, 1)
    assert exceptional_P(params, 1).coeffs == (Fraction(21, 4), Fraction(0), Fraction(-1))


def test_first_excited_L2():
    # Tests P_{1,1} for L2 with g = 1

    params = ModelParams(Family.L2, 1, 1)
    assert exceptional_P(params, 1).coeffs == (Fraction(-21, 4), Fraction(0), Fraction(1))


def test_classical_limit():
    # Tests l = 0 reproduces L_n^(g-1/2) for both families

    for family in [Family.L1, Family.L2]:
        for g in [Fraction(1), Fraction(3, 2), Fraction(5, 2)]:
            params = ModelParams(family, 0, g)
            for n in range(9):
                assert exceptional_P(params, n) == laguerre(n, g-HALF)


def test_no_constant_member():
    # Tests the lowest member of a deformed family is not a constant

    params = ModelParams(Family.L2, 2, Fraction(3, 2))
    assert min(exceptional_P(params, n).degree() for n in range(4)) == 2


def test_negative_n():
    # Tests negative indices are rejected

    with pytest.raises(XL.ParameterRangeError):
        exceptional_P(ModelParams(Family.L1, 1, 1), -1)


def test_L1_xi_positive_coefficients():
    # Tests every coefficient of the L1 xi_l is positive, so xi_l has no zeros on (0, inf)

    for ell in [1, 2, 3]:
        for g in [Fraction(3, 4), Fraction(1), Fraction(3, 2), Fraction(5, 2), Fraction(7)]:
            xi = deforming_xi(ModelParams(Family.L1, ell, g))
            assert xi.degree() == ell
            assert all(coefficient > 0 for coefficient in xi.coeffs)
