# Tests the invariant suite

import xlaguerre as XL
import numpy as np
import pytest

from xlaguerre.polycore import Family, ModelParams
from xlaguerre.verify import Verifier, CheckResult


def small_verifier(**kwargs):
    return Verifier(families=["L1"], ells=[1], gs=["1"], n_max=3, fd_points=1000, **kwargs)


def test_single_model_passes():
    # Tests every check passes for one regular model

    verifier = small_verifier()
    results = verifier.run(fokker_planck=False)
    assert len(results) > 0
    assert verifier.failures() == []
    assert verifier.passed()

    names = [result.name for result in results]
    assert "residual deformed [L1 l=1 g=1/1]" in names
    assert "residual dc plus [L1 l=1 g=1/1]" in names
    assert "dc potential identity exact [L1 l=1 g=1/1]" in names
    assert "dc partner mapping exact [L1 l=1 g=1/1]" in names
    assert "dc partner mapping pointwise [L1 l=1 g=1/1]" in names
    assert "fd isospectral dc [L1 l=1 g=1/1]" in names
    assert "dirac broken ground [L1 l=1 m=1]" in names
    assert "shape invariance [g=1/1]" in names


def test_exact_checks_are_exact():
    # Tests exact checks report a value of exactly zero

    verifier = small_verifier()
    verifier.run(fokker_planck=False)
    for result in verifier.results:
        if result.tolerance == 0.0:
            assert result.value == 0.0


def test_perturbed_run_fails():
    # Tests the negative control makes the residual checks fail

    verifier = small_verifier(perturb=1e-3)
    verifier.run(fokker_planck=False)
    assert not verifier.passed()
    failures = [result.name for result in verifier.failures()]
    assert "residual deformed [L1 l=1 g=1/1]" in failures
    assert "residual dc minus [L1 l=1 g=1/1]" in failures
    assert all(name.startswith("residual") for name in failures)
    assert verifier.report()["perturb"] == 1e-3


def test_classical_limit_sweep():
    # Tests a sweep at l = 0 is reported as the classical limit

    verifier = Verifier(families=["L2"], ells=[0], gs=["3/2"], n_max=3, fd_points=1000)
    verifier.run(fokker_planck=False)
    assert verifier.passed()
    report = verifier.report()
    assert report["classical_limit"]
    notes = {check["name"] : check["note"] for check in report["checks"]}
    assert notes["residual deformed [L2 l=0 g=3/2]"] == "classical limit"
    assert not any("dc" in name for name in notes)


def test_report_is_reproducible():
    # Tests two identical runs give identical reports

    reports = []
    for _ in range(2):
        verifier = small_verifier()
        verifier.run(fokker_planck=False)
        reports.append(verifier.report())
    assert reports[0] == reports[1]
    assert "time" not in str(reports[0])


def test_guarded_error_state():
    # Tests numerical failures are raised by default and recorded as failures otherwise

    def failing():
        raise XL.QuadratureNotConvergedError(1.0, 1e-12)

    verifier = small_verifier()
    with pytest.raises(XL.QuadratureNotConvergedError):
        verifier._guarded("failing", 1.0, failing)

    verifier.set_err_state(quadrature="ignore")
    result = verifier._guarded("failing", 1.0, failing)
    assert not result.passed
    assert result.value == np.inf
    assert result.note.startswith("numerical failure")

    verifier.set_err_state(quadrature="warn")
    with pytest.warns(UserWarning):
        verifier._guarded("failing", 1.0, failing)

    verifier.set_err_state(quadrature="shout")
    with pytest.raises(RuntimeError):
        verifier._guarded("failing", 1.0, failing)


def test_fokker_planck_checks():
    # Tests the Fokker-Planck cross-validation on the deformed Rayleigh process

    verifier = small_verifier()
    verifier.check_fokker_planck(ModelParams(Family.L1, 1, 1, check_dc_range=False))
    assert len(verifier.results) == 3
    assert verifier.passed()


def test_check_result_json():
    # Tests the result export

    data = CheckResult("name", 0.5, 1.0, True).to_json()
    assert data == {"name" : "name", "value" : 0.5, "tolerance" : 1.0, "passed" : True, "note" : ""}
