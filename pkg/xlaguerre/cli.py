"""Command-line surface.

    python -m xlaguerre poly --family L1 --ell 1 --g 1/1 --nmax 3
    python -m xlaguerre verify [--perturb 1e-3]
    python -m xlaguerre dirac --profile deformed --ell 1 --m 0 --mass 1
    python -m xlaguerre fp --drift deformed-rayleigh --t 0.5
    python -m xlaguerre input.json

Every command writes its data files next to the output prefix together with a
manifest that echoes the resolved configuration. The manifest carries the only
timestamp. Exit codes: 0 success, 1 failed checks, 2 usage or validation errors.
"""

import argparse
import datetime
import sys
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from xlaguerre.polycore import Family, ModelParams, HALF, laguerre, deforming_xi, exceptional_P, rational_to_str
from xlaguerre.structured import evaluate_polynomial
from xlaguerre.sqm import prepotential_W0, prepotential_Wl_deformed, prepotential_Wl_dc
from xlaguerre.dirac import (vector_potential_deformed, vector_potential_dc, vector_potential_classical, pauli_central,
                             pauli_cylindrical, magnetic_field_closed_form, dirac_spectrum, dirac_state, scalar_1d, sample_state)
from xlaguerre.fokker import (fp_from_prepotential, fp_expand, BumpInitial, DilatedInitial, CrankNicolsonOracle, GridDensity)
from xlaguerre.verify import Verifier, DEFAULT_FAMILIES, DEFAULT_ELLS, DEFAULT_GS
from xlaguerre.exceptions import (ParameterRangeError, SingularDeformationError, UnimplementedBranchError, NonNormalizableError,
                                  QuadratureNotConvergedError, SturmCountError, TruncationNotConvergedError, NonFiniteSolutionError)
from xlaguerre.helpers import parse_input, import_rational, import_value, write_json, write_csv
from xlaguerre import numerics


SCHEMA_VERSION = "1.0"
COMMANDS = ("poly", "verify", "dirac", "fp")
PROFILES = ("deformed", "dc", "oscillator", "coulomb", "zero-field")
COUPLINGS = ("minimal", "pauli-central", "pauli-cylindrical", "scalar-1d")
DRIFTS = ("deformed-rayleigh", "rayleigh")
INITIALS = ("bump", "dilated", "stationary")

EXIT_SUCCESS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2

VALIDATION_ERRORS = (ParameterRangeError, SingularDeformationError, UnimplementedBranchError, NonNormalizableError,
                     ValueError, TypeError, IOError)
NUMERICAL_ERRORS = (QuadratureNotConvergedError, SturmCountError, TruncationNotConvergedError, NonFiniteSolutionError)


@dataclass
class RunConfig:
    """Resolved configuration of one command.

    Members
    -------
    command : str
        One of "poly", "verify", "dirac" or "fp".

    family, ell, g, omega :
        Model parameters. g is a Fraction.

    m, k : int
        Quantum labels for the Dirac couplings.

    mass : float

    profile : str
        Profile choice for dirac.

    coupling : str
        Coupling kind for dirac.

    strength : float
        Strength of the coulomb and zero-field profiles.

    drift, initial, t, dt, scale :
        Fokker-Planck settings; t and dt are in units of 1/omega.

    n_max, grid_points, quadrature_nodes, fd_points : int
        Sizes.

    perturb : float or None
        Negative-control perturbation for verify.

    output : str
        Prefix of every output file.

    format : str
        "json" or "csv".

    quiet : bool

    sweep : bool
        Whether verify runs the default parameter sweep instead of the given model.
    """
    command: str
    family: Family = Family.L1
    ell: int = 1
    g: object = Fraction(1)
    omega: float = 1.0
    m: int = 0
    k: int = -1
    mass: float = 1.0
    profile: str = "deformed"
    coupling: str = "minimal"
    strength: float = 1.0
    drift: str = "deformed-rayleigh"
    initial: str = "bump"
    t: float = 0.5
    dt: float = 1e-3
    scale: float = 1.05
    n_max: int = 5
    grid_points: int = 400
    quadrature_nodes: int = 200
    fd_points: int = 4000
    perturb: object = None
    output: str = "xlaguerre"
    format: str = "json"
    quiet: bool = False
    sweep: bool = True

    def validate(self):
        """Checks everything that can be checked before dispatch."""
        if self.command not in COMMANDS:
            raise ValueError("'{0}' is not a command. Choose from {1}.".format(self.command, ", ".join(COMMANDS)))
        self.family = Family.parse(self.family)
        if not isinstance(self.g, Fraction):
            raise ValueError("g must be an exact rational, got {0}.".format(self.g))
        for name in ("ell", "n_max", "grid_points", "quadrature_nodes", "fd_points"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ParameterRangeError(name, value, "a non-negative integer")
        if self.fd_points < numerics.MIN_FD_POINTS:
            raise ParameterRangeError("fd_points", self.fd_points, "fd_points >= {0}".format(numerics.MIN_FD_POINTS))
        if not self.omega > 0.0:
            raise ParameterRangeError("omega", self.omega, "omega > 0")
        if not self.mass >= 0.0:
            raise ParameterRangeError("mass", self.mass, "M >= 0")
        if not self.t >= 0.0:
            raise ParameterRangeError("t", self.t, "t >= 0")
        if not self.dt > 0.0:
            raise ParameterRangeError("dt", self.dt, "dt > 0")
        if self.profile not in PROFILES:
            raise ParameterRangeError("profile", self.profile, "one of {0}".format(", ".join(PROFILES)))
        if self.coupling not in COUPLINGS:
            raise ParameterRangeError("coupling", self.coupling, "one of {0}".format(", ".join(COUPLINGS)))
        if self.drift not in DRIFTS:
            raise ParameterRangeError("drift", self.drift, "one of {0}".format(", ".join(DRIFTS)))
        if self.initial not in INITIALS:
            raise ParameterRangeError("initial", self.initial, "one of {0}".format(", ".join(INITIALS)))
        if self.format not in ("json", "csv"):
            raise ParameterRangeError("format", self.format, "'json' or 'csv'")
        return self


    def params(self, check_dc_range=False):
        return ModelParams(self.family, self.ell, self.g, self.omega, check_dc_range=check_dc_range)


    def filename(self, suffix):
        return "{0}_{1}".format(self.output, suffix)


    def to_json(self):
        data = asdict(self)
        data["family"] = self.family.value
        data["g"] = rational_to_str(self.g)
        return data


def _section_options(input_dict):
    # Flattens the sections of an input dictionary into RunConfig keyword arguments
    options = {}
    model = input_dict.get("model", {})
    if "family" in model:
        options["family"] = Family.parse(model["family"])
    if "ell" in model:
        options["ell"] = import_value("ell", model, None, int)
    if "g" in model:
        options["g"] = import_rational("g", model, None)
    if "omega" in model:
        options["omega"] = import_value("omega", model, None)
    if any(key in model for key in ("family", "ell", "g")):
        options["sweep"] = False

    dirac = input_dict.get("dirac", {})
    for key, kind in (("profile", str), ("coupling", str), ("m", int), ("k", int), ("mass", float), ("strength", float)):
        if key in dirac:
            options[key] = import_value(key, dirac, None, kind)

    fokker = input_dict.get("fokker", {})
    for key, kind in (("drift", str), ("t", float), ("dt", float)):
        if key in fokker:
            options[key] = import_value(key, fokker, None, kind)
    initial = fokker.get("initial", {})
    if "type" in initial:
        options["initial"] = import_value("type", initial, None, str)
    if "scale" in initial:
        options["scale"] = import_value("scale", initial, None)

    sizes = input_dict.get("numerics", {})
    for key in ("n_max", "grid_points", "quadrature_nodes", "fd_points"):
        if key in sizes:
            options[key] = import_value(key, sizes, None, int)

    output = input_dict.get("output", {})
    if "path" in output:
        options["output"] = import_value("path", output, None, str)
    if "format" in output:
        options["format"] = import_value("format", output, None, str)
    return options


def config_from_dict(command, input_dict, overrides=None):
    """RunConfig for command from an input dictionary, with overrides (e.g. from a "run" entry) on top."""
    options = _section_options(input_dict)
    for key, value in (overrides or {}).items():
        if key == "g":
            value = import_rational("g", overrides, None)
        elif key == "family":
            value = Family.parse(value)
        if key in ("family", "ell", "g"):
            options["sweep"] = False
        options[key] = value
    return RunConfig(command, **options).validate()


def write_manifest(config, outputs, exit_code):
    """Writes {prefix}_{command}_manifest.json echoing the resolved configuration."""
    manifest = {
        "schema_version" : SCHEMA_VERSION,
        "command" : config.command,
        "config" : config.to_json(),
        "outputs" : outputs,
        "exit_code" : exit_code,
        "timestamp" : datetime.datetime.now(datetime.timezone.utc).isoformat()
    }
    filename = config.filename("{0}_manifest.json".format(config.command))
    write_json(filename, manifest)
    return filename


def _coeff_strings(p):
    return [rational_to_str(c) for c in p.coeffs]


def cmd_poly(config):
    """Coefficients of xi_l(eta;g), xi_l(eta;g+1) and P_{l,n}(eta;g) for n <= n_max, with sampled values.

    l = 0 gives the classical Laguerre table L_n^(g-1/2).

    Returns
    -------
    list of str
        Files written.

    int
        Exit code.
    """
    params = config.params()
    params.validate_oscillator_range()
    xi_g = deforming_xi(params)
    xi_g1 = deforming_xi(params.shifted(1))
    polynomials = [exceptional_P(params, n) for n in range(config.n_max+1)]

    eta = np.linspace(0.0, 4.0*(config.n_max+params.ell+1), config.grid_points)
    samples = [evaluate_polynomial(p, eta) for p in polynomials]

    if config.format == "csv":
        coefficients_file = config.filename("poly_coefficients.csv")
        rows = [["xi_g", "", k, c] for k, c in enumerate(_coeff_strings(xi_g))]
        rows += [["xi_g+1", "", k, c] for k, c in enumerate(_coeff_strings(xi_g1))]
        for n, p in enumerate(polynomials):
            rows += [["P", n, k, c] for k, c in enumerate(_coeff_strings(p))]
        write_csv(coefficients_file, ["polynomial", "n", "power", "coefficient"], rows)

        samples_file = config.filename("poly_samples.csv")
        write_csv(samples_file, ["eta"]+["P_{0}".format(n) for n in range(config.n_max+1)], np.column_stack([eta]+samples).tolist())
        return [coefficients_file, samples_file], EXIT_SUCCESS

    data = {
        "schema_version" : SCHEMA_VERSION,
        "params" : params.to_json(),
        "classical" : params.ell == 0,
        "xi" : _coeff_strings(xi_g),
        "xi_shifted" : _coeff_strings(xi_g1),
        "P" : [{"n" : n, "degree" : p.degree(), "coeffs" : _coeff_strings(p)} for n, p in enumerate(polynomials)],
        "samples" : {"eta" : eta.tolist(), "P" : [s.tolist() for s in samples]}
    }
    if params.ell == 0:
        data["laguerre"] = [_coeff_strings(laguerre(n, params.g-HALF)) for n in range(config.n_max+1)]
    filename = config.filename("poly.json")
    write_json(filename, data)
    return [filename], EXIT_SUCCESS


def cmd_verify(config):
    """Runs the invariant suite. Exit code 0 only if every check passes."""
    if config.sweep:
        verifier = Verifier(families=DEFAULT_FAMILIES, ells=DEFAULT_ELLS, gs=DEFAULT_GS, omega=config.omega,
                            n_max=config.n_max, fd_points=config.fd_points, quadrature_nodes=config.quadrature_nodes,
                            perturb=config.perturb, mass=config.mass, fp_time=config.t, fp_dt=config.dt)
    else:
        verifier = Verifier(families=[config.family], ells=[config.ell], gs=[config.g], omega=config.omega,
                            n_max=config.n_max, fd_points=config.fd_points, quadrature_nodes=config.quadrature_nodes,
                            perturb=config.perturb, mass=config.mass, fp_time=config.t, fp_dt=config.dt)
    verifier.run(verbose=not config.quiet)

    report = verifier.report()
    report["schema_version"] = SCHEMA_VERSION
    filename = config.filename("verify.json")
    write_json(filename, report)

    if not verifier.passed():
        print("Failed checks:", file=sys.stderr)
        for name in report["failures"]:
            print("    {0}".format(name), file=sys.stderr)
        return [filename], EXIT_CHECK_FAILURE
    return [filename], EXIT_SUCCESS


def _dirac_profile(config):
    # CouplingProfile for the configured coupling and profile choice
    params = config.params()
    if config.coupling == "pauli-central":
        return pauli_central(params, config.k, choice=config.profile)
    if config.coupling == "pauli-cylindrical":
        return pauli_cylindrical(params, config.m, choice=config.profile)
    if config.profile == "deformed":
        return vector_potential_deformed(params, config.m)
    if config.profile == "dc":
        return vector_potential_dc(params, config.m)
    return vector_potential_classical(config.profile, config.m, config.strength if config.profile != "oscillator" else config.omega)


def cmd_dirac(config):
    """Spectrum JSON and sampled (r, f_+, f_-) CSV of a radial Dirac system, or of the 1+1 dimensional
    scalar case with coupling "scalar-1d"."""
    if config.coupling == "scalar-1d":
        params = config.params()
        W = prepotential_Wl_dc(params.with_g(params.g, check_dc_range=True)) if config.profile == "dc" else prepotential_Wl_deformed(params)
        solution = scalar_1d(W, config.mass, config.n_max)
        data = solution.spectrum.to_json()
        data["kind"] = "lorentz-scalar-1d"
        data["params"] = params.to_json()
        data["scalar_potential_plus_mass"] = solution.scalar_potential_closed_form().to_json()
        states = solution.states
        omega = W.omega
    else:
        profile = _dirac_profile(config)
        spectrum = dirac_spectrum(profile, config.mass, config.n_max)
        data = spectrum.to_json(profile)
        states = []
        omega = profile.omega
        if profile.prepotential is not None:
            data["magnetic_field"] = magnetic_field_closed_form(profile).to_json()
            states = [dirac_state(profile, config.mass, level.n) for level in spectrum.levels]
    data["schema_version"] = SCHEMA_VERSION

    spectrum_file = config.filename("dirac.json")
    write_json(spectrum_file, data)
    outputs = [spectrum_file]

    if len(states) > 0:
        x_max = numerics.domain_end(omega, power=max(float(states[-1].upper.effective_power_at_infinity()), 0.0))
        grid = numerics.log_linear_grid(x_max, config.grid_points, x_min=1e-3/np.sqrt(omega))
        rows = []
        for state in states:
            for r, f_plus, f_minus in sample_state(state, omega, grid):
                rows.append([state.n, float(state.energy), float(r), float(f_plus), float(f_minus)])
        states_file = config.filename("dirac_states.csv")
        write_csv(states_file, ["n", "E", "r", "f_plus", "f_minus"], rows)
        outputs.append(states_file)

    return outputs, EXIT_SUCCESS


def _fp_model(config):
    params = config.params()
    if config.drift == "rayleigh":
        W = prepotential_W0(config.g, config.omega)
    else:
        W = prepotential_Wl_deformed(params)
    return fp_from_prepotential(W, n_max=config.n_max, quadrature_nodes=config.quadrature_nodes)


def cmd_fp(config):
    """Spectral Fokker-Planck evolution sampled as (t, x, P) and compared with the Crank-Nicolson oracle."""
    model = _fp_model(config)
    if config.initial == "bump":
        initial = BumpInitial(model)
    elif config.initial == "dilated":
        initial = DilatedInitial(model, config.scale)
    else:
        initial = lambda x : model.stationary_density().evaluate(x, model.omega)

    solution = fp_expand(model, initial, verbose=not config.quiet)

    t_final = config.t/config.omega
    times = np.linspace(0.0, t_final, 5)
    grid = model.default_grid()
    oracle = CrankNicolsonOracle(model, grid, config.dt/config.omega)
    _, history = oracle.evolve(initial(grid), t_final, record_times=times, verbose=not config.quiet)

    rows = []
    comparisons = []
    for snapshot in history:
        spectral = GridDensity(grid, solution.density(grid, snapshot.t), snapshot.t)
        comparisons.append({"t" : snapshot.t, "L1_distance" : spectral.l1_distance(snapshot), "mass" : spectral.mass()})
        for x, P in zip(grid, spectral.values):
            rows.append([snapshot.t, float(x), float(P)])

    density_file = config.filename("fp.csv")
    write_csv(density_file, ["t", "x", "P"], rows)

    report = solution.to_json()
    report["comparisons"] = comparisons
    report["schema_version"] = SCHEMA_VERSION
    report_file = config.filename("fp.json")
    write_json(report_file, report)
    return [density_file, report_file], EXIT_SUCCESS


def run_command(config):
    """Dispatches one validated RunConfig, writes its manifest and returns the exit code."""
    dispatch = {"poly" : cmd_poly, "verify" : cmd_verify, "dirac" : cmd_dirac, "fp" : cmd_fp}
    try:
        outputs, exit_code = dispatch[config.command](config)
    except VALIDATION_ERRORS as e:
        print("Error: {0}".format(e), file=sys.stderr)
        return EXIT_USAGE
    except NUMERICAL_ERRORS as e:
        print("Error: {0}".format(e), file=sys.stderr)
        outputs, exit_code = [], EXIT_CHECK_FAILURE
    write_manifest(config, outputs, exit_code)
    return exit_code


def _build_parser():
    parser = argparse.ArgumentParser(prog="xlaguerre", description="Exceptional Laguerre systems, their Dirac and Fokker-Planck cousins.")
    subparsers = parser.add_subparsers(dest="command")

    for command in COMMANDS:
        sub = subparsers.add_parser(command)
        sub.add_argument("--family", default=None, help="L1 or L2")
        sub.add_argument("--ell", type=int, default=None)
        sub.add_argument("--g", default=None, help="coupling as a p/q string")
        sub.add_argument("--omega", type=float, default=None)
        sub.add_argument("--nmax", dest="n_max", type=int, default=None)
        sub.add_argument("--grid-points", dest="grid_points", type=int, default=None)
        sub.add_argument("--quadrature-nodes", dest="quadrature_nodes", type=int, default=None)
        sub.add_argument("--fd-points", dest="fd_points", type=int, default=None)
        sub.add_argument("--output", default=None, help="prefix of the output files")
        sub.add_argument("--format", default=None, choices=("json", "csv"))
        sub.add_argument("--quiet", action="store_true")

        if command == "verify":
            sub.add_argument("--perturb", type=float, default=None)
        if command in ("verify", "dirac"):
            sub.add_argument("--mass", type=float, default=None)
        if command == "dirac":
            sub.add_argument("--profile", default=None, choices=PROFILES)
            sub.add_argument("--coupling", default=None, choices=COUPLINGS)
            sub.add_argument("--m", type=int, default=None)
            sub.add_argument("--k", type=int, default=None)
            sub.add_argument("--strength", type=float, default=None)
        if command in ("verify", "fp"):
            sub.add_argument("--t", type=float, default=None)
            sub.add_argument("--dt", type=float, default=None)
        if command == "fp":
            sub.add_argument("--drift", default=None, choices=DRIFTS)
            sub.add_argument("--initial", default=None, choices=INITIALS)
            sub.add_argument("--scale", type=float, default=None)

    return parser


def config_from_args(argv):
    """Parses command-line flags into a validated RunConfig."""
    args = _build_parser().parse_args(argv)
    if args.command is None:
        raise ValueError("No command given. Choose from {0} or pass a .json input file.".format(", ".join(COMMANDS)))
    overrides = {key : value for key, value in vars(args).items() if value is not None and key not in ("command", "quiet")}
    overrides["quiet"] = args.quiet
    return config_from_dict(args.command, {}, overrides)


def run_prescribed_analyses(input_filename, quiet=False):
    """Runs every command under "run" in the input file, in order. Returns the largest exit code."""
    input_dict = parse_input(input_filename)
    prefix = input_filename.replace(".json", "")

    if not quiet:
        print("\nRunning prescribed analyses")
        print("---------------------------")

    worst = EXIT_SUCCESS
    for key, options in input_dict.get("run", {}).items():
        options = dict(options)
        options.setdefault("output", input_dict.get("output", {}).get("path", prefix))
        options["quiet"] = options.get("quiet", quiet)

        if key not in COMMANDS:
            print("{0} is not recognized as a valid run command. Skipping...".format(key))
            continue

        if not quiet:
            print()
            print("Calling {0}...".format(key), end='')
        try:
            config = config_from_dict(key, input_dict, options)
        except VALIDATION_ERRORS as e:
            print("Error: {0}".format(e), file=sys.stderr)
            worst = max(worst, EXIT_USAGE)
            continue
        exit_code = run_command(config)
        worst = max(worst, exit_code)
        if not quiet:
            print("Done" if exit_code == EXIT_SUCCESS else "Failed (exit code {0})".format(exit_code))

    if not quiet:
        print("\nCompleted prescribed analyses.")
    return worst


def main(argv=None):
    """Entry point. Returns the process exit code."""
    argv = sys.argv[1:] if argv is None else argv
    quiet = "--quiet" in argv

    if len(argv) > 0 and argv[0].endswith(".json"):
        try:
            return run_prescribed_analyses(argv[0], quiet=quiet)
        except VALIDATION_ERRORS as e:
            print("Error: {0}".format(e), file=sys.stderr)
            return EXIT_USAGE

    try:
        config = config_from_args(argv)
    except VALIDATION_ERRORS as e:
        print("Error: {0}".format(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # argparse usage errors
        return EXIT_USAGE if e.code not in (0, None) else EXIT_SUCCESS
    return run_command(config)
