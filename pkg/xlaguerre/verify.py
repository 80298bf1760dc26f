"""Invariant suite behind the verify command.

Each check produces a CheckResult holding the measured value, the tolerance
it was held to and whether it passed. The report contains no timings, so two
runs with the same configuration give identical reports.
"""

import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from xlaguerre.polycore import Family, ModelParams, HALF, laguerre, deforming_xi, exceptional_P, rational_to_str
from xlaguerre.sqm import (Hamiltonian, prepotential_W0, prepotential_Wl_deformed, prepotential_Wl_dc, eigensystem_deformed,
                           eigensystem_dc_pair, residual_check, perturb_state, shape_invariance_gap, ladder_state,
                           dc_offset_units, dc_reference_coupling, dc_potential_identity, dc_partner_identity, dc_partner_states)
from xlaguerre.dirac import vector_potential_deformed, vector_potential_dc, dirac_state, pair_residual
from xlaguerre.fokker import fp_from_prepotential, fp_expand, fp_evolve, fp_oracle_cn, BumpInitial, CrankNicolsonOracle, decay_rate_fit, stationary_residual
from xlaguerre.exceptions import QuadratureNotConvergedError, SturmCountError, TruncationNotConvergedError
from xlaguerre import numerics


DEFAULT_FAMILIES = (Family.L1, Family.L2)
DEFAULT_ELLS = (1, 2, 3)
DEFAULT_GS = (Fraction(1), Fraction(3, 2), Fraction(5, 2))


@dataclass
class CheckResult:
    """Outcome of one check.

    Members
    -------
    name : str

    value : float
        Measured quantity.

    tolerance : float
        The check passes when value <= tolerance.

    passed : bool

    note : str
    """
    name: str
    value: float
    tolerance: float
    passed: bool
    note: str = ""

    def to_json(self):
        return {
            "name" : self.name,
            "value" : float(self.value),
            "tolerance" : float(self.tolerance),
            "passed" : bool(self.passed),
            "note" : self.note
        }


def _label(params):
    return "{0} l={1} g={2}".format(params.family.value, params.ell, rational_to_str(params.g))


def _has_dc_pair(params):
    # Darboux-Crum pairs need l >= 1 and the family range of g
    if params.ell < 1:
        return False
    if params.family is Family.L1:
        return params.g > HALF
    return params.g > -HALF


class Verifier:
    """Runs the invariant suite over a sweep of models.

    Parameters
    ----------
    families : list, optional
        Defaults to L1 and L2.

    ells : list of int, optional
        Defaults to 1, 2, 3. A sweep that only contains l = 0 runs the classical-limit checks.

    gs : list, optional
        Couplings as Fractions or "p/q" strings. Defaults to 1, 3/2, 5/2.

    omega : float, optional
        Defaults to 1.

    n_max : int, optional
        Highest level checked. Defaults to 5.

    fd_points : int, optional
        Interior nodes of the coarse FD grid. Defaults to 4000.

    quadrature_nodes : int, optional
        Defaults to 200.

    perturb : float, optional
        If given, every wavefunction gets a small extra numerator term before the residual checks
        (negative control). Defaults to None.

    mass : float, optional
        Mass for the Dirac checks. Defaults to 1.

    fp_time : float, optional
        Time (units of 1/omega) at which the spectral and Crank-Nicolson densities are compared.
        Defaults to 0.5.

    fp_dt : float, optional
        Crank-Nicolson time step (units of 1/omega). Defaults to 1e-3.
    """

    def __init__(self, **kwargs):

        self._families = [Family.parse(family) for family in kwargs.get("families", DEFAULT_FAMILIES)]
        self._ells = list(kwargs.get("ells", DEFAULT_ELLS))
        self._gs = [ModelParams(Family.L1, 0, g, check_dc_range=False).g for g in kwargs.get("gs", DEFAULT_GS)]
        self._omega = float(kwargs.get("omega", 1.0))
        self._n_max = kwargs.get("n_max", 5)
        self._fd_points = kwargs.get("fd_points", 4000)
        self._quadrature_nodes = kwargs.get("quadrature_nodes", 200)
        self._perturb = kwargs.get("perturb", None)
        self._mass = float(kwargs.get("mass", 1.0))
        self._fp_time = kwargs.get("fp_time", 0.5)
        self._fp_dt = kwargs.get("fp_dt", 1e-3)

        self.results = []
        self.set_err_state()


    def set_err_state(self, **kwargs):
        """Sets how numerical failures inside a check are to be handled.

        Each error type can be set to "raise", "warn", or "ignore". All default to "raise". With "warn"
        or "ignore" the affected check is recorded as failed.

        Parameters
        ----------
        quadrature : str, optional
            How to handle QuadratureNotConvergedError.

        sturm : str, optional
            How to handle SturmCountError.

        truncation : str, optional
            How to handle TruncationNotConvergedError.
        """
        self._err_state = {}
        self._err_state["quadrature"] = kwargs.get("quadrature", "raise")
        self._err_state["sturm"] = kwargs.get("sturm", "raise")
        self._err_state["truncation"] = kwargs.get("truncation", "raise")


    def _handle_error(self, error):
        # Handles an error according to the error state

        if isinstance(error, QuadratureNotConvergedError):
            key = "quadrature"
        elif isinstance(error, SturmCountError):
            key = "sturm"
        elif isinstance(error, TruncationNotConvergedError):
            key = "truncation"
        else:
            raise error

        instruction = self._err_state[key]
        if instruction == "raise":
            raise error
        elif instruction == "warn":
            warnings.warn(str(error))
        elif instruction == "ignore":
            return
        else:
            raise RuntimeError("XLaguerre got an incorrect error handling instruction. '{0}' is invalid.".format(instruction))


    def _record(self, name, value, tolerance, note=""):
        value = float(value)
        result = CheckResult(name, value, tolerance, bool(value <= tolerance), note)
        self.results.append(result)
        return result


    def _guarded(self, name, tolerance, check):
        # Runs a check, turning handled numerical failures into a failed result
        try:
            value, note = check()
        except (QuadratureNotConvergedError, SturmCountError, TruncationNotConvergedError) as e:
            self._handle_error(e)
            return self._record(name, np.inf, tolerance, "numerical failure: {0}".format(e))
        return self._record(name, value, tolerance, note)


    def _sweep(self):
        # All (family, ell, g) combinations
        for family in self._families:
            for ell in self._ells:
                for g in self._gs:
                    yield ModelParams(family, ell, g, self._omega, check_dc_range=False)


    def _states(self, states):
        if self._perturb is None:
            return states
        return [perturb_state(state, self._perturb) for state in states]


    def check_residuals(self, params):
        """Exact residual of (H_l^(+) - 4n omega) psi_{l,n} and, for l >= 1, of both Darboux-Crum partners."""
        label = _label(params)
        note = "classical limit" if params.ell == 0 else ""

        H = Hamiltonian(prepotential_Wl_deformed(params), 1)
        states = self._states(eigensystem_deformed(params, self._n_max, normalized=False))
        value = max(residual_check(H, state) for state in states)
        self._record("residual deformed [{0}]".format(label), value, 0.0, note)

        if _has_dc_pair(params):
            W = prepotential_Wl_dc(params.with_g(params.g, check_dc_range=True))
            offset = dc_offset_units(params)
            plus, minus = eigensystem_dc_pair(params, self._n_max, normalized=False)
            H_plus = Hamiltonian(W, 1)
            H_minus = Hamiltonian(W, -1)
            value = max(residual_check(H_plus, state) for state in self._states(plus))
            self._record("residual dc plus [{0}]".format(label), value, 0.0, "energies 4n+{0} in units of omega".format(offset))
            value = max(residual_check(H_minus, state) for state in self._states(minus))
            self._record("residual dc minus [{0}]".format(label), value, 0.0)


    def check_polynomials(self, params):
        """deg P_{l,n} = l+n and P_{l,0} = xi_l(eta;g+1)."""
        label = _label(params)
        mismatches = sum(exceptional_P(params, n).degree() != params.ell+n for n in range(self._n_max+1))
        self._record("degree [{0}]".format(label), mismatches, 0.0)
        seed = exceptional_P(params, 0)-deforming_xi(params.shifted(1))
        self._record("seed [{0}]".format(label), float(seed.max_abs_coeff()), 0.0)


    def check_classical_limit(self, family, g, n_max=8):
        """l = 0 reproduces L_n^(g-1/2) coefficient-wise."""
        params = ModelParams(family, 0, g, self._omega, check_dc_range=False)
        worst = max((exceptional_P(params, n)-laguerre(n, g-HALF)).max_abs_coeff() for n in range(n_max+1))
        self._record("classical limit [{0}]".format(_label(params)), float(worst), 0.0, "classical limit")


    def check_orthogonality(self, params):
        """Gram matrix of the normalized deformed eigenfunctions."""
        def check():
            states = eigensystem_deformed(params, self._n_max, n_nodes=self._quadrature_nodes)
            G = numerics.gram_matrix([state.wavefunction for state in states], self._omega, n_nodes=self._quadrature_nodes)
            return float(np.max(np.abs(G-np.eye(len(states))))), "max |G - I|"
        self._guarded("orthonormality [{0}]".format(_label(params)), 1e-10, check)


    def check_dc_identities(self, params):
        """Exact and pointwise forms of the Darboux-Crum potential identities."""
        label = _label(params)
        offset = dc_offset_units(params)

        exact_reference = dc_potential_identity(params)-offset
        exact_partner = dc_partner_identity(params)-offset
        self._record("dc potential identity exact [{0}]".format(label), float(exact_reference.num.max_abs_coeff()), 0.0)
        self._record("dc partner identity exact [{0}]".format(label), float(exact_partner.num.max_abs_coeff()), 0.0)

        # Pointwise; the grid starts where the common 1/x^2 terms still cancel to round-off
        W_dc = prepotential_Wl_dc(params.with_g(params.g, check_dc_range=True))
        W_ref = prepotential_W0(dc_reference_coupling(params), self._omega)
        x = numerics.log_linear_grid(6.0/np.sqrt(self._omega), 2000, x_min=0.1/np.sqrt(self._omega))
        difference = Hamiltonian(W_dc, 1).potential(x)-Hamiltonian(W_ref, 1).potential(x)
        value = np.max(np.abs(difference-float(offset)*self._omega))
        self._record("dc potential identity pointwise [{0}]".format(label), value, 1e-10)


    def check_dc_partners(self, params):
        """A^+ maps the plus side onto the deformed-oscillator states, exactly and on a grid."""
        label = _label(params)
        matches = []

        def pointwise():
            matches.extend(dc_partner_states(params, self._n_max, n_nodes=self._quadrature_nodes))
            constants = ", ".join("{0:.12g}".format(match.constant) for match in matches if match.proportional)
            return max(match.deviation for match in matches), "constants " + constants
        self._guarded("dc partner mapping pointwise [{0}]".format(label), 1e-9, pointwise)

        misses = sum(not match.proportional for match in matches) if matches else np.inf
        self._record("dc partner mapping exact [{0}]".format(label), misses, 0.0)


    def _fd_x_max(self, params):
        power = float(params.g)+params.ell+2*self._n_max+2
        return numerics.domain_end(self._omega, power=power)


    def check_isospectrality(self, params):
        """FD spectrum of H_l^(+) against 4n omega and, for l >= 1, of the Darboux-Crum H^(+)."""
        label = _label(params)
        k = self._n_max+1
        x_max = self._fd_x_max(params)

        def deformed():
            H = Hamiltonian(prepotential_Wl_deformed(params), 1)
            eigs = numerics.fd_eigs(H, self._fd_points, x_max, k)
            exact = 4.0*self._omega*np.arange(k)
            return float(np.max(np.abs(eigs-exact))), "N={0}, Richardson h -> h/2".format(self._fd_points)
        self._guarded("fd isospectral deformed [{0}]".format(label), 1e-3, deformed)

        if not _has_dc_pair(params):
            return

        def dc():
            H = Hamiltonian(prepotential_Wl_dc(params.with_g(params.g, check_dc_range=True)), 1)
            eigs = numerics.fd_eigs(H, self._fd_points, x_max, k)
            exact = self._omega*(4.0*np.arange(k)+float(dc_offset_units(params)))
            return float(np.max(np.abs(eigs-exact))), "N={0}, Richardson h -> h/2".format(self._fd_points)
        self._guarded("fd isospectral dc [{0}]".format(label), 1e-3, dc)


    def check_shape_invariance(self, g):
        """V^(-)(g) - V^(+)(g+1) = 4 omega and the ladder construction of the radial states."""
        gap = shape_invariance_gap(g, self._omega)-4
        self._record("shape invariance [g={0}]".format(rational_to_str(g)), float(gap.num.max_abs_coeff()), 0.0)

        params = ModelParams(Family.L1, 0, g, self._omega, check_dc_range=False)
        states = eigensystem_deformed(params, self._n_max, normalized=False)
        misses = sum(not ladder_state(g, state.n, self._omega).is_proportional_to(state.wavefunction) for state in states)
        self._record("ladder states [g={0}]".format(rational_to_str(g)), misses, 0.0)


    def _dirac_m(self, g):
        # Largest m with m+1/2 <= g when g is half-odd, else m = 1
        m = g-HALF
        if m >= 0 and m.denominator == 1:
            return int(m)
        return 1


    def check_dirac(self, params):
        """Pair equations, the unbroken zero mode and the broken Darboux-Crum ground state."""
        m = self._dirac_m(params.g)
        label = "{0} l={1} m={2}".format(params.family.value, params.ell, m)

        def unbroken_ground():
            profile = vector_potential_deformed(params, m)
            return dirac_state(profile, self._mass, 0).norm_ratio(self._omega), "||f_-||/||f_+||"
        self._guarded("dirac unbroken ground [{0}]".format(label), 1e-12, unbroken_ground)

        def excited():
            profile = vector_potential_deformed(params, m)
            worst = 0.0
            for n in range(1, self._n_max+1):
                worst = max(worst, pair_residual(profile.prepotential, dirac_state(profile, self._mass, n)))
            return worst, "n = 1..{0}".format(self._n_max)
        self._guarded("dirac pair residual [{0}]".format(label), 1e-10, excited)

        rebuilt = vector_potential_deformed(params, m)
        difference = rebuilt.rebuilt_derivative()-rebuilt.prepotential.derivative
        self._record("dirac rebuilt prepotential [{0}]".format(label), float(difference.num.max_abs_coeff()), 0.0)

        if not _has_dc_pair(params.with_g(m+HALF)):
            return

        def broken_ground():
            profile = vector_potential_dc(params, m)
            H = profile.reduced_hamiltonian()
            eig = numerics.fd_eigs(H, self._fd_points, self._fd_x_max(profile.params), 1)[0]
            exact = float(dc_offset_units(profile.params))*self._omega
            ratio = dirac_state(profile, self._mass, 0).norm_ratio(self._omega)
            note = "E^2-M^2 = {0}, ||f_-||/||f_+|| = {1:.6e}".format(exact, ratio)
            if not ratio > 1e-3:
                return np.inf, note+" (lower component vanishes)"
            return abs(eig-exact), note
        self._guarded("dirac broken ground [{0}]".format(label), 1e-3, broken_ground)


    def check_fokker_planck(self, params):
        """Spectral against Crank-Nicolson, the slowest decay rate and the stationary residual."""
        label = _label(params)
        model = fp_from_prepotential(prepotential_Wl_deformed(params), n_max=self._n_max, quadrature_nodes=self._quadrature_nodes)
        initial = BumpInitial(model)
        grid = model.default_grid()
        t = self._fp_time/self._omega
        dt = self._fp_dt/self._omega

        def cross():
            solution = fp_expand(model, initial)
            spectral = fp_evolve(solution, t, grid)
            oracle = fp_oracle_cn(model, initial, t, grid=grid, dt=dt)
            return spectral.l1_distance(oracle), "t = {0}, {1} modes".format(t, solution.n_max+1)
        self._guarded("fp spectral vs crank-nicolson [{0}]".format(label), 1e-4, cross)

        oracle = CrankNicolsonOracle(model, grid, dt)
        rate = decay_rate_fit(oracle, initial(grid))
        self._record("fp decay rate [{0}]".format(label), abs(rate/(4.0*self._omega)-1.0), 0.02,
                     "fitted rate {0:.6f}, expected {1}".format(rate, 4.0*self._omega))

        self._record("fp stationary residual [{0}]".format(label), stationary_residual(model), 1e-8)


    def run(self, **kwargs):
        """Runs every check.

        Parameters
        ----------
        verbose : bool, optional
            Print a table of results as the checks complete. Defaults to False.

        fokker_planck : bool, optional
            Include the Fokker-Planck cross-validation. Defaults to True.

        Returns
        -------
        list of CheckResult
        """
        verbose = kwargs.get("verbose", False)
        fokker_planck = kwargs.get("fokker_planck", True)
        self.results = []

        if verbose:
            print("Running invariant suite...")
            print("{0:<60}{1:<20}{2:<20}{3:<10}".format("Check", "Value", "Tolerance", "Status"))
            print("".join(['-']*110))
            start_time = time.time()
        n_printed = 0

        def report():
            nonlocal n_printed
            if verbose:
                for result in self.results[n_printed:]:
                    print("{0:<60}{1:<20.6e}{2:<20.1e}{3:<10}".format(result.name, result.value, result.tolerance, "pass" if result.passed else "FAIL"))
            n_printed = len(self.results)

        # Checks that depend on (family, ell, g)
        first_g = {}
        for params in self._sweep():
            self.check_residuals(params)
            self.check_polynomials(params)
            self.check_orthogonality(params)
            if _has_dc_pair(params):
                self.check_dc_identities(params)
                self.check_dc_partners(params)
            key = (params.family, params.ell)
            if key not in first_g:
                first_g[key] = params
                self.check_isospectrality(params)
                self.check_dirac(params)
            report()

        # Undeformed limit
        for family in self._families:
            for g in self._gs:
                self.check_classical_limit(family, g)
        for g in self._gs:
            self.check_shape_invariance(g)
        report()

        if fokker_planck:
            params = ModelParams(Family.L1, 1, 1, self._omega, check_dc_range=False)
            if self._ells == [0] or len(self._gs) == 1:
                params = ModelParams(self._families[0], self._ells[0], self._gs[0], self._omega, check_dc_range=False)
            self.check_fokker_planck(params)
            report()

        if verbose:
            n_failed = len(self.failures())
            print("{0} checks, {1} failed ({2:.1f} s)".format(len(self.results), n_failed, time.time()-start_time))
        return self.results


    def failures(self):
        return [result for result in self.results if not result.passed]


    def passed(self):
        return len(self.results) > 0 and len(self.failures()) == 0


    def report(self):
        """JSON report. Contains no timings."""
        return {
            "omega" : self._omega,
            "n_max" : self._n_max,
            "perturb" : self._perturb,
            "classical_limit" : self._ells == [0],
            "passed" : self.passed(),
            "checks" : [result.to_json() for result in self.results],
            "failures" : [result.name for result in self.failures()]
        }
