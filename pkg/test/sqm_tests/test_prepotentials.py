# Tests the prepotentials and Hamiltonians

import xlaguerre as XL
import numpy as np
import pytest
from fractions import Fraction

from xlaguerre.polycore import Family, ModelParams
from xlaguerre.sqm import (Prepotential, Hamiltonian, hamiltonian, potential_eval, prepotential_W0, prepotential_Wl_deformed,
                           prepotential_Wl_dc, susy_apply, shape_invariance_gap, dc_potential_identity, dc_partner_identity,
                           dc_offset_units)


def test_W0_ranges():
    # Tests the radial oscillator needs g > 0 and omega > 0

    with pytest.raises(XL.ParameterRangeError):
        prepotential_W0(0)
    with pytest.raises(XL.ParameterRangeError):
        prepotential_W0(1, omega=-1.0)


def test_W0_potential():
    # Tests V = omega^2 x^2 - (2g+1) omega + g(g-1)/x^2

    g = Fraction(3, 2)
    omega = 2.0
    H = hamiltonian(prepotential_W0(g, omega), 1)
    x = np.array([0.3, 0.7, 1.9])
    expected = omega**2*x**2-(2*float(g)+1.0)*omega+float(g*(g-1))/x**2
    assert np.allclose(potential_eval(H, x), expected, rtol=0.0, atol=1e-12)
    assert abs(potential_eval(hamiltonian(prepotential_W0(1)), 2.0)-1.0) < 1e-13


def test_W0_values():
    # Tests W itself and its derivative

    W = prepotential_W0(2, omega=0.5)
    x = 1.3
    assert abs(W(x)-(-0.25*x*x+2.0*np.log(x))) < 1e-14
    assert abs(W.evaluate_derivative(x)-(-0.5*x+2.0/x)) < 1e-14


def test_partner_potential():
    # Tests the sign -1 Hamiltonian is W'^2 - W''

    W = prepotential_Wl_deformed(ModelParams(Family.L1, 1, 1))
    x = np.linspace(0.5, 4.0, 20)
    plus = Hamiltonian(W, 1).potential(x)
    minus = Hamiltonian(W, -1).potential(x)
    h = 1e-5
    W_second = (W.evaluate_derivative(x+h)-W.evaluate_derivative(x-h))/(2.0*h)
    assert np.allclose(plus-minus, 2.0*W_second, rtol=0.0, atol=1e-6)


def test_offset():
    # Tests the additive offset is in units of omega

    W = prepotential_W0(1, omega=3.0)
    x = np.array([0.5, 1.0])
    assert np.allclose(Hamiltonian(W, 1, 2).potential(x)-Hamiltonian(W, 1).potential(x), 6.0, rtol=0.0, atol=1e-12)


def test_open_domain():
    # Tests potentials are only evaluated on x > 0

    H = hamiltonian(prepotential_W0(1))
    with pytest.raises(XL.ParameterRangeError):
        H.potential(np.array([0.0, 1.0]))


def test_deformed_singular():
    # Tests a prepotential built from a deforming polynomial with positive zeros is rejected

    with pytest.raises(XL.SingularDeformationError):
        Prepotential(-1, 1, ((1, XL.PolyQ([-1, 1])),))


def test_dc_ranges():
    # Tests the Darboux-Crum prepotentials enforce their ranges

    with pytest.raises(XL.ParameterRangeError):
        prepotential_Wl_dc(ModelParams(Family.L1, 1, Fraction(1, 2), check_dc_range=False))
    W = prepotential_Wl_dc(ModelParams(Family.L2, 1, 0))
    assert W.a == -1
    assert W.b == -1


def test_normalizability():
    # Tests e^W is normalizable for the oscillators but not for the L1 Darboux-Crum prepotential

    assert prepotential_W0(Fraction(1, 2)).is_normalizable()
    assert prepotential_Wl_deformed(ModelParams(Family.L2, 2, 1)).is_normalizable()
    assert not prepotential_Wl_dc(ModelParams(Family.L1, 1, 1)).is_normalizable()


def test_ground_state_annihilated():
    # Tests A^+ e^W = 0

    for params in [ModelParams(Family.L1, 2, Fraction(3, 2)), ModelParams(Family.L2, 3, 1)]:
        W = prepotential_Wl_deformed(params)
        assert susy_apply(1, W, W.ground_state()).is_zero()


def test_shape_invariance():
    # Tests V^(-)(g) - V^(+)(g+1) = 4 omega exactly

    for g in [Fraction(1), Fraction(3, 2), Fraction(7, 3)]:
        assert shape_invariance_gap(g) == 4
        assert shape_invariance_gap(g, omega=2.5) == 4


def test_dc_identities():
    # Tests the Darboux-Crum potential and partner identities hold exactly

    for family in [Family.L1, Family.L2]:
        for ell in [1, 2, 3]:
            params = ModelParams(family, ell, Fraction(3, 2))
            offset = dc_offset_units(params)
            assert dc_potential_identity(params) == offset
            assert dc_partner_identity(params) == offset


def test_dc_offsets():
    # Tests the constants 2(2g+4l-1) (L1) and 2(2g+1) (L2)

    assert dc_offset_units(ModelParams(Family.L1, 1, 1)) == 10
    assert dc_offset_units(ModelParams(Family.L2, 1, 1)) == 6
    assert dc_offset_units(ModelParams(Family.L2, 1, Fraction(1, 2))) == 4


def test_json():
    # Tests the Hamiltonian export

    data = Hamiltonian(prepotential_W0(Fraction(3, 2)), -1, 4).to_json()
    assert data["sign"] == -1
    assert data["offset"] == "4/1"
    assert data["prepotential"]["b"] == "3/2"
    assert data["prepotential"]["kind"] == "radial"
