# Tests the finite-difference spectrum oracle

import os

import xlaguerre as XL
import numpy as np
import pytest

from xlaguerre import numerics
from xlaguerre.polycore import Family, ModelParams
from xlaguerre.sqm import Hamiltonian, prepotential_W0, prepotential_Wl_deformed, prepotential_Wl_dc


def test_sturm_count():
    # Tests the pivot count on the matrix [[2,-1],[-1,2]] with eigenvalues 1 and 3

    diagonal = np.array([2.0, 2.0])
    off_diagonal = np.array([-1.0])
    assert numerics.sturm_count(diagonal, off_diagonal, 0.0) == 0
    assert numerics.sturm_count(diagonal, off_diagonal, 2.0) == 1
    assert numerics.sturm_count(diagonal, off_diagonal, 4.0) == 2


def test_radial_oscillator():
    # Tests the spectrum 0, 4, 8, 12 of the radial oscillator at g = 1

    H = Hamiltonian(prepotential_W0(1), 1)
    eigs = numerics.fd_eigs(H, 1000, 8.0, 4)
    assert np.allclose(eigs, [0.0, 4.0, 8.0, 12.0], rtol=0.0, atol=1e-3)


def test_deformed_isospectral():
    # Tests the deformed oscillator keeps the radial spectrum

    H = Hamiltonian(prepotential_Wl_deformed(ModelParams(Family.L1, 1, 1)), 1)
    eigs = numerics.fd_eigs(H, 1000, 10.0, 4)
    assert np.allclose(eigs, [0.0, 4.0, 8.0, 12.0], rtol=0.0, atol=1e-3)


def test_dc_lowest_level():
    # Tests the plus-side ground level 2(2g+1) omega of the L2 Darboux-Crum system

    H = Hamiltonian(prepotential_Wl_dc(ModelParams(Family.L2, 1, 1)), 1)
    eigs = numerics.fd_eigs(H, 1000, 10.0, 2)
    assert np.allclose(eigs, [6.0, 10.0], rtol=0.0, atol=1e-3)


def test_callable_potential():
    # Tests a bare potential function is accepted

    eigs = numerics.fd_eigs(lambda x : x*x, 1000, 8.0, 2, x_min=0.0)
    assert np.allclose(eigs, [3.0, 7.0], rtol=0.0, atol=1e-3)

    with pytest.raises(TypeError):
        numerics.fd_eigs(3.0, 10, 1.0, 1)


def test_minimum_grid():
    # Tests the oracle refuses coarse grids while the convergence ladder may start below them

    H = Hamiltonian(prepotential_W0(1), 1)
    with pytest.raises(XL.ParameterRangeError):
        numerics.fd_eigs(H, numerics.MIN_FD_POINTS-1, 8.0, 2)
    assert len(numerics.fd_eigs(H, numerics.MIN_FD_POINTS, 8.0, 2)) == 2

    ladder = numerics.fd_convergence_ladder(H, 100, 8.0, 2, [0.0, 4.0], levels=2)
    assert len(ladder["h"]) == 2


def test_richardson_improves():
    # Tests extrapolation beats the plain coarse grid

    H = Hamiltonian(prepotential_W0(1), 1)
    plain = numerics.fd_eigs(H, 1000, 8.0, 3, richardson=False)
    extrapolated = numerics.fd_eigs(H, 1000, 8.0, 3)
    exact = np.array([0.0, 4.0, 8.0])
    assert np.max(np.abs(extrapolated-exact)) < np.max(np.abs(plain-exact))


def test_default_x_min():
    # Tests the Dirichlet end moves out with the centrifugal barrier

    H_free = Hamiltonian(prepotential_W0(1), 1)
    H_barrier = Hamiltonian(prepotential_W0(3), 1)
    assert numerics.default_x_min(H_free, 8.0) < numerics.default_x_min(H_barrier, 8.0)
    assert numerics.default_x_min(H_barrier, 8.0) <= 8e-3


def test_convergence_ladder():
    # Tests the observed order of the unextrapolated eigenvalues is close to 2

    H = Hamiltonian(prepotential_W0(1), 1)
    ladder = numerics.fd_convergence_ladder(H, 400, 8.0, 3, [0.0, 4.0, 8.0], levels=3)
    assert len(ladder["h"]) == 3
    assert np.array(ladder["errors"]).shape == (3, 3)
    assert np.all(np.abs(np.array(ladder["orders"])-2.0) < 0.2)


def test_convergence_csv(tmp_path):
    # Tests the CSV dump of a convergence ladder

    H = Hamiltonian(prepotential_W0(1), 1)
    ladder = numerics.fd_convergence_ladder(H, 100, 8.0, 2, [0.0, 4.0], levels=2)
    filename = os.path.join(str(tmp_path), "ladder.csv")
    numerics.write_convergence_csv(filename, ladder)

    with open(filename, 'r', newline='') as csv_file:
        lines = csv_file.read().split("\n")
    assert lines[0] == "h,index,error,order"
    assert len(lines) == 6 # header, 4 rows and the final newline
    assert lines[1].endswith(",")
    assert not lines[3].endswith(",")
    assert "\r" not in "".join(lines)
