# Tests the __main__ script and the command-line surface

import subprocess as sp
import sys
import os
import json

from xlaguerre import cli


input_file = "test/input_for_testing.json"


def run_xlaguerre(*args):
    return sp.run([sys.executable, "-m", "xlaguerre"]+list(args), capture_output=True, text=True)


def test_main():
    # Tests the files are created properly for a JSON input

    # Alter input
    with open(input_file, 'r') as input_handle:
        input_dict = json.load(input_handle)

    input_dict["run"] = {
        "poly" : {},
        "dirac" : {
            "profile" : "dc",
            "m" : 1
        },
        "fp" : {
            "initial" : "dilated"
        }
    }

    # Write new input to file
    altered_input_name = "unique_name.json"
    with open(altered_input_name, 'w') as new_input_handle:
        json.dump(input_dict, new_input_handle, indent=4)

    # Run XLaguerre
    result = run_xlaguerre(altered_input_name)
    assert result.returncode == 0
    assert "Calling poly...Done" in result.stdout

    # Check the proper files have been created
    created = ["_poly.json", "_poly_manifest.json", "_dirac.json", "_dirac_states.csv", "_dirac_manifest.json",
               "_fp.csv", "_fp.json", "_fp_manifest.json"]
    for suffix in created:
        assert os.path.exists(altered_input_name.replace(".json", suffix))

    with open(altered_input_name.replace(".json", "_dirac.json"), 'r') as dirac_handle:
        dirac_data = json.load(dirac_handle)
    assert dirac_data["susy"] == "broken"
    assert dirac_data["params"]["g"] == "3/2"

    with open(altered_input_name.replace(".json", "_fp_manifest.json"), 'r') as manifest_handle:
        manifest = json.load(manifest_handle)
    assert manifest["exit_code"] == 0
    assert manifest["config"]["initial"] == "dilated"
    assert manifest["config"]["g"] == "3/2"

    # Cleanup
    for suffix in created:
        os.remove(altered_input_name.replace(".json", suffix))
    os.remove(altered_input_name)


def test_poly(tmp_path):
    # Tests the polynomial table for L1, l = 1, g = 1

    prefix = os.path.join(str(tmp_path), "poly")
    result = run_xlaguerre("poly", "--family", "L1", "--ell", "1", "--g", "1/1", "--nmax", "3", "--output", prefix, "--quiet")
    assert result.returncode == 0
    assert result.stdout == ""

    with open(prefix+"_poly.json", 'r') as poly_handle:
        data = json.load(poly_handle)
    assert data["xi"] == ["3/2", "1/1"]
    assert data["P"][1]["coeffs"] == ["21/4", "0/1", "-1/1"]
    assert [entry["degree"] for entry in data["P"]] == [1, 2, 3, 4]
    assert not data["classical"]

    with open(prefix+"_poly_manifest.json", 'r') as manifest_handle:
        manifest = json.load(manifest_handle)
    assert manifest["schema_version"] == cli.SCHEMA_VERSION
    assert manifest["exit_code"] == 0
    assert manifest["outputs"] == [prefix+"_poly.json"]
    assert "timestamp" in manifest


def test_poly_csv(tmp_path):
    # Tests the CSV tables

    prefix = os.path.join(str(tmp_path), "poly")
    assert cli.main(["poly", "--ell", "2", "--g", "3/2", "--format", "csv", "--output", prefix, "--quiet"]) == 0
    with open(prefix+"_poly_coefficients.csv", 'r', newline='') as csv_handle:
        lines = csv_handle.read().split("\n")
    assert lines[0] == "polynomial,n,power,coefficient"
    assert lines[1] == "xi_g,,0,6/1"
    with open(prefix+"_poly_samples.csv", 'r', newline='') as csv_handle:
        assert csv_handle.readline() == "eta,P_0,P_1,P_2,P_3,P_4,P_5\n"


def test_classical_table(tmp_path):
    # Tests l = 0 also writes the Laguerre table

    prefix = os.path.join(str(tmp_path), "poly")
    assert cli.main(["poly", "--ell", "0", "--g", "1", "--nmax", "2", "--output", prefix, "--quiet"]) == 0
    with open(prefix+"_poly.json", 'r') as poly_handle:
        data = json.load(poly_handle)
    assert data["classical"]
    assert data["laguerre"][1] == ["3/2", "-1/1"]
    assert data["P"][1]["coeffs"] == data["laguerre"][1]


def test_bad_rational(tmp_path):
    # Tests a zero denominator is a validation error

    result = run_xlaguerre("poly", "--g", "1/0", "--output", os.path.join(str(tmp_path), "bad"), "--quiet")
    assert result.returncode == 2
    assert "zero denominator" in result.stderr


def test_float_coupling_rejected(tmp_path):
    # Tests the command line only takes exact couplings

    assert cli.main(["poly", "--g", "1.3", "--output", os.path.join(str(tmp_path), "bad"), "--quiet"]) == 2


def test_mirrored_branch(tmp_path):
    # Tests the mirrored Dirac branch is refused with exit code 2

    result = run_xlaguerre("dirac", "--m", "-1", "--output", os.path.join(str(tmp_path), "dirac"), "--quiet")
    assert result.returncode == 2
    assert "unimplemented mirrored branch" in result.stderr


def test_usage_errors(tmp_path):
    # Tests argparse and dispatch errors map to exit code 2

    assert cli.main(["bogus"]) == 2
    assert cli.main([]) == 2
    assert cli.main(["fp", "--drift", "sideways"]) == 2
    assert cli.main(["poly", "--family", "L3", "--output", os.path.join(str(tmp_path), "bad"), "--quiet"]) == 2
    assert cli.main(["verify", "--fd-points", "10", "--output", os.path.join(str(tmp_path), "bad"), "--quiet"]) == 2


def test_verify_single_model(tmp_path):
    # Tests verify passes for one model and that identical runs give identical reports

    reports = []
    for name in ["first", "second"]:
        prefix = os.path.join(str(tmp_path), name)
        exit_code = cli.main(["verify", "--family", "L1", "--ell", "1", "--g", "1", "--nmax", "2", "--fd-points", "1000",
                              "--output", prefix, "--quiet"])
        assert exit_code == 0
        with open(prefix+"_verify.json", 'rb') as report_handle:
            reports.append(report_handle.read())
    assert reports[0] == reports[1]

    data = json.loads(reports[0].decode("utf-8"))
    assert data["passed"]
    assert data["failures"] == []
    assert any(check["name"].startswith("fp decay rate") for check in data["checks"])


def test_verify_perturbed(tmp_path):
    # Tests the negative control fails with exit code 1

    prefix = os.path.join(str(tmp_path), "perturbed")
    result = run_xlaguerre("verify", "--family", "L2", "--ell", "1", "--g", "3/2", "--nmax", "2", "--fd-points", "1000",
                           "--perturb", "1e-3", "--output", prefix, "--quiet")
    assert result.returncode == 1
    assert "Failed checks" in result.stderr
    assert "residual deformed [L2 l=1 g=3/2]" in result.stderr

    with open(prefix+"_verify_manifest.json", 'r') as manifest_handle:
        assert json.load(manifest_handle)["exit_code"] == 1


def test_verify_classical_limit(tmp_path):
    # Tests the l = 0 run reports the classical limit

    prefix = os.path.join(str(tmp_path), "classical")
    assert cli.main(["verify", "--ell", "0", "--g", "3/2", "--nmax", "2", "--fd-points", "1000", "--output", prefix, "--quiet"]) == 0
    with open(prefix+"_verify.json", 'r') as report_handle:
        data = json.load(report_handle)
    assert data["classical_limit"]
    assert "classical limit" in [check["note"] for check in data["checks"]]


def test_dirac_scalar(tmp_path):
    # Tests the 1+1 dimensional branch of the dirac command

    prefix = os.path.join(str(tmp_path), "scalar")
    assert cli.main(["dirac", "--coupling", "scalar-1d", "--nmax", "2", "--grid-points", "50", "--output", prefix, "--quiet"]) == 0
    with open(prefix+"_dirac.json", 'r') as dirac_handle:
        data = json.load(dirac_handle)
    assert data["kind"] == "lorentz-scalar-1d"
    assert len(data["levels"]) == 5
    with open(prefix+"_dirac_states.csv", 'r', newline='') as csv_handle:
        assert csv_handle.readline() == "n,E,r,f_plus,f_minus\n"


def test_dirac_coulomb(tmp_path):
    # Tests classical profiles write the spectrum without sampled states

    prefix = os.path.join(str(tmp_path), "coulomb")
    assert cli.main(["dirac", "--profile", "coulomb", "--m", "1", "--strength", "1.0", "--mass", "0", "--nmax", "2",
                     "--output", prefix, "--quiet"]) == 0
    with open(prefix+"_dirac.json", 'r') as dirac_handle:
        data = json.load(dirac_handle)
    assert abs(data["levels"][1]["E2_minus_M2"]-0.64) < 1e-14
    assert not os.path.exists(prefix+"_dirac_states.csv")


def test_fp(tmp_path):
    # Tests the fp command writes the density table and the comparison report

    prefix = os.path.join(str(tmp_path), "fp")
    assert cli.main(["fp", "--drift", "rayleigh", "--g", "1", "--initial", "dilated", "--output", prefix, "--quiet"]) == 0
    with open(prefix+"_fp.json", 'r') as fp_handle:
        data = json.load(fp_handle)
    assert data["lambda_n"][:3] == [0.0, 4.0, 8.0]
    assert len(data["comparisons"]) == 5
    assert all(entry["L1_distance"] < 1e-4 for entry in data["comparisons"])
    with open(prefix+"_fp.csv", 'r', newline='') as csv_handle:
        assert csv_handle.readline() == "t,x,P\n"
