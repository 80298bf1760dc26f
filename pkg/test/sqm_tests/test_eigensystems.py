# Tests the closed-form eigensystems and the residual checks

import xlaguerre as XL
import numpy as np
import pytest
from fractions import Fraction

from xlaguerre import numerics
from xlaguerre.polycore import Family, ModelParams
from xlaguerre.sqm import (Hamiltonian, prepotential_W0, prepotential_Wl_deformed, prepotential_Wl_dc, eigensystem_deformed,
                           eigensystem_dc_pair, eigensystem_for, residual_check, perturb_state, ladder_state, normalize,
                           eigensystem_to_json, dc_partner_states, Prepotential)


def test_deformed_residuals():
    # Tests (H_l^(+) - 4n omega) psi_{l,n} = 0 exactly

    for family in [Family.L1, Family.L2]:
        for ell in [1, 2, 3]:
            for g in [Fraction(1), Fraction(3, 2), Fraction(5, 2)]:
                params = ModelParams(family, ell, g)
                H = Hamiltonian(prepotential_Wl_deformed(params), 1)
                for state in eigensystem_deformed(params, 5, normalized=False):
                    assert residual_check(H, state) == 0.0


def test_energies():
    # Tests E_n = 4n omega

    params = ModelParams(Family.L2, 2, Fraction(3, 2), omega=0.75)
    states = eigensystem_deformed(params, 3, normalized=False)
    assert [state.energy_units for state in states] == [0, 4, 8, 12]
    assert np.allclose([state.energy for state in states], [0.0, 3.0, 6.0, 9.0], rtol=0.0, atol=1e-15)


def test_dc_pair_residuals():
    # Tests both Darboux-Crum partners exactly

    for family in [Family.L1, Family.L2]:
        for ell in [1, 2]:
            params = ModelParams(family, ell, Fraction(3, 2))
            W = prepotential_Wl_dc(params)
            plus, minus = eigensystem_dc_pair(params, 4, normalized=False)
            for state in plus:
                assert residual_check(Hamiltonian(W, 1), state) == 0.0
            for state in minus:
                assert residual_check(Hamiltonian(W, -1), state) == 0.0


def test_dc_energies():
    # Tests the plus-side energies 4(n+g+2l-1/2) (L1) and 4(n+g+1/2) (L2)

    plus, minus = eigensystem_dc_pair(ModelParams(Family.L1, 1, 1), 2, normalized=False)
    assert [state.energy_units for state in plus] == [10, 14, 18]
    assert [state.energy_units for state in minus] == [10, 14, 18]
    plus, _ = eigensystem_dc_pair(ModelParams(Family.L2, 2, 1), 1, normalized=False)
    assert [state.energy_units for state in plus] == [6, 10]


def test_dc_pair_needs_deformation():
    # Tests l = 0 has no Darboux-Crum pair

    with pytest.raises(XL.ParameterRangeError):
        eigensystem_dc_pair(ModelParams(Family.L1, 0, 1), 3)


def test_float_path():
    # Tests an irrational-looking coupling goes through the grid residual

    params = ModelParams(Family.L1, 1, 1.3)
    H = Hamiltonian(prepotential_Wl_deformed(params), 1)
    for state in eigensystem_deformed(params, 3, normalized=False):
        assert residual_check(H, state) < 1e-10
    with pytest.raises(ValueError):
        residual_check(H, state, path="exact")


def test_perturbed_state_fails():
    # Tests the negative control gives a residual of 2*eps for the radial ground state

    H = Hamiltonian(prepotential_W0(1), 1)
    state = eigensystem_deformed(ModelParams(Family.L1, 0, 1), 0, normalized=False)[0]
    assert residual_check(H, state) == 0.0
    assert abs(residual_check(H, perturb_state(state, 1e-3))-2e-3) < 1e-12


def test_orthonormality():
    # Tests the normalized deformed eigenfunctions are orthonormal

    params = ModelParams(Family.L1, 2, Fraction(3, 2))
    states = eigensystem_deformed(params, 5)
    G = numerics.gram_matrix([state.wavefunction for state in states], params.omega)
    assert np.allclose(G, np.eye(6), rtol=0.0, atol=1e-10)


def test_normalize():
    # Tests normalization and the sign convention

    W = prepotential_W0(Fraction(3, 2), omega=2.0)
    f = normalize(W.ground_state().scaled(-4.0), W.omega)
    assert f.sign_near_zero() == 1
    assert abs(numerics.integrate_structured(f*f, W.omega)-1.0) < 1e-12

    with pytest.raises(XL.NonNormalizableError):
        normalize(prepotential_Wl_dc(ModelParams(Family.L1, 1, 1)).ground_state(), 1.0)


def test_ladder_states():
    # Tests the operator ladder reproduces the radial eigenfunctions

    for g in [Fraction(1), Fraction(5, 2)]:
        states = eigensystem_deformed(ModelParams(Family.L1, 0, g), 5, normalized=False)
        for state in states:
            assert ladder_state(g, state.n).is_proportional_to(state.wavefunction)


def test_eigensystem_for():
    # Tests dispatch on the kind of prepotential

    params = ModelParams(Family.L2, 1, 1)
    assert eigensystem_for(prepotential_Wl_dc(params), 2, normalized=False)[0].energy_units == 6
    assert eigensystem_for(prepotential_Wl_deformed(params), 2, normalized=False)[2].energy_units == 8
    with pytest.raises(ValueError):
        eigensystem_for(Prepotential(-1, 1), 2)


def test_json():
    # Tests both energy conventions are exported

    params = ModelParams(Family.L1, 1, 1)
    plus, _ = eigensystem_dc_pair(params, 1, normalized=False)
    data = eigensystem_to_json(params, plus, ground_units=plus[0].energy_units)
    assert data["params"]["g"] == "1/1"
    assert data["states"][1]["energy_units"] == "14/1"
    assert data["states"][1]["energy_ground_zero_units"] == "4/1"
    assert data["states"][0]["wavefunction"]["a"] == "-1/1"


def test_dc_partner_states():
    # Tests A^+ maps the plus side onto the deformed-oscillator states of the same n

    for family in [Family.L1, Family.L2]:
        for ell in [1, 2, 3]:
            for g in [Fraction(1), Fraction(5, 2)]:
                matches = dc_partner_states(ModelParams(family, ell, g), 5)
                assert [match.n for match in matches] == list(range(6))
                for match in matches:
                    assert match.proportional
                    assert match.deviation < 1e-9


def test_dc_partner_constants():
    # Tests the recorded constants against the unnormalized states on a grid

    x = np.linspace(0.2, 3.0, 30)
    for family in [Family.L1, Family.L2]:
        params = ModelParams(family, 2, Fraction(3, 2), omega=2.0)
        _, minus = eigensystem_dc_pair(params, 3, normalized=False)
        deformed = eigensystem_deformed(params, 3, normalized=False)
        matches = dc_partner_states(params, 3)
        for match, partner, state in zip(matches, minus, deformed):
            values = partner.wavefunction.evaluate(x, 2.0)
            scaled = match.constant*state.wavefunction.evaluate(x, 2.0)
            assert np.allclose(values, scaled, rtol=0.0, atol=1e-10*np.max(np.abs(values)))


def test_dc_partner_order():
    # Tests neighbouring levels are not proportional

    params = ModelParams(Family.L1, 1, 1)
    _, minus = eigensystem_dc_pair(params, 2, normalized=False)
    deformed = eigensystem_deformed(params, 2, normalized=False)
    assert not minus[1].wavefunction.is_proportional_to(deformed[0].wavefunction)
    assert minus[1].wavefunction.proportionality_constant(deformed[2].wavefunction, 1.0) is None


def test_partner_constants_json():
    # Tests the partner constants are exported with the minus side

    params = ModelParams(Family.L2, 1, 1)
    _, minus = eigensystem_dc_pair(params, 2, normalized=False)
    data = eigensystem_to_json(params, minus, partners=dc_partner_states(params, 2))
    assert [entry["n"] for entry in data["partner_constants"]] == [0, 1, 2]
    assert all(entry["proportional"] for entry in data["partner_constants"])
    assert all(entry["constant"] != 0.0 for entry in data["partner_constants"])
