"""Exactly solvable Fokker-Planck equations and a Crank-Nicolson oracle.

The equation is dP/dt = -d/dx(D1 P) + d^2P/dx^2 on (0, inf) with drift
D1 = 2W'(x). The similarity transform P = phi_0 psi maps it onto the
Schrodinger operator -d^2/dx^2 + W'^2 + W'', so the closed-form eigenstates
of sqm give

    P(x,t) = phi_0(x) sum_n c_n phi_n(x) exp(-lambda_n t),
    c_n = int phi_n(x) P(x,0)/phi_0(x) dx.
"""

import time
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate as sint
import scipy.interpolate as sinterp
import scipy.linalg as sla
import scipy.optimize as sopt
import scipy.special as sspec

from xlaguerre.sqm import Hamiltonian, eigensystem_for, normalize
from xlaguerre.exceptions import (NonNormalizableError, QuadratureNotConvergedError, TruncationNotConvergedError,
                                  NonFiniteSolutionError, ParameterRangeError)
from xlaguerre import numerics


class FPModel:
    """Fokker-Planck model with drift 2W'(x) and unit diffusion on (0, inf).

    Parameters
    ----------
    prepotential : Prepotential
        Must have a normalizable stationary density e^(2W).

    n_max : int, optional
        Number of modes built up front. More are built on demand. Defaults to 8.

    n_cap : int, optional
        Largest number of modes the adaptive truncation may use. Defaults to 80.

    quadrature_nodes : int, optional
        Gauss nodes for projections. Defaults to 200.

    tail_tolerance : float, optional
        Acceptance threshold for |c_n_max|/max|c_n|. Defaults to 1e-8.
    """

    def __init__(self, prepotential, **kwargs):

        if not prepotential.is_normalizable():
            raise NonNormalizableError("the stationary density exp(2W) needs a decaying gaussian and a log(x) coefficient above -1/2")

        self.prepotential = prepotential
        self.omega = prepotential.omega
        self._n_cap = kwargs.get("n_cap", 80)
        self._quadrature_nodes = kwargs.get("quadrature_nodes", 200)
        self._tail_tolerance = kwargs.get("tail_tolerance", 1e-8)
        self._hamiltonian = Hamiltonian(prepotential, 1)

        self._states = []
        self._build_states(kwargs.get("n_max", 8))

        self._ground = normalize(prepotential.ground_state(), self.omega)
        self._stationary = self._ground*self._ground

        self.set_err_state()


    def set_err_state(self, **kwargs):
        """Sets how errors are to be handled.

        Each error type can be set to "raise", "warn", or "ignore". All default to "raise".

        Parameters
        ----------
        truncation : str, optional
            How to handle TruncationNotConvergedError.

        quadrature : str, optional
            How to handle QuadratureNotConvergedError.
        """
        self._err_state = {}
        self._err_state["truncation"] = kwargs.get("truncation", "raise")
        self._err_state["quadrature"] = kwargs.get("quadrature", "raise")


    def _handle_error(self, error):
        # Handles an error according to the error state

        if isinstance(error, TruncationNotConvergedError):
            key = "truncation"
        elif isinstance(error, QuadratureNotConvergedError):
            key = "quadrature"
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


    def _build_states(self, n_max):
        if len(self._states) <= n_max:
            self._states = eigensystem_for(self.prepotential, n_max, n_nodes=self._quadrature_nodes)


    def states(self, n_max):
        """Normalized eigenstates phi_0..phi_n_max."""
        self._build_states(n_max)
        return self._states[:n_max+1]


    def eigenvalues(self, n_max):
        """Decay rates lambda_n = E_n (lambda_0 = 0)."""
        return np.array([state.energy for state in self.states(n_max)])


    def ground_state(self):
        """phi_0 = e^W, normalized."""
        return self._ground


    def stationary_density(self):
        """P_0 = phi_0^2 = e^(2W) as a normalized StructuredFn."""
        return self._stationary


    def mode_density(self, n):
        """Eigenmode P_n = phi_0 phi_n of the Fokker-Planck operator."""
        return self._ground*self.states(n)[n].wavefunction


    def drift(self, x):
        """D1(x) = 2W'(x)."""
        return 2.0*self.prepotential.evaluate_derivative(x)


    def schrodinger_potential(self, x):
        """W'^2 + W'' of the similarity-transformed operator."""
        return self._hamiltonian.potential(x)


    def operator(self, P, x, h):
        """-d/dx(D1 P) + d^2P/dx^2 applied to the callable P at x by central differences with step h."""
        flux = lambda y : self.drift(y)*P(y)
        return -(flux(x+h)-flux(x-h))/(2.0*h)+(P(x+h)-2.0*P(x)+P(x-h))/(h*h)


    def support(self, tolerance=numerics.TAIL_TOLERANCE):
        """Interval (x_lo, x_hi) outside which P_0 < tolerance*max P_0."""
        x_end = numerics.domain_end(self.omega, power=max(float(self._stationary.effective_power_at_infinity())/2.0, 0.0), tolerance=tolerance*1e-4)
        x = np.logspace(-10, np.log10(x_end), 4000)
        P = self._stationary.evaluate(x, self.omega)
        i_max = int(np.argmax(P))
        level = np.log(tolerance*P[i_max])
        f = lambda y : np.log(max(self._stationary.evaluate(y, self.omega), 1e-320))-level

        if P[0] >= tolerance*P[i_max]:
            x_lo = x[0]
        else:
            i_lo = np.nonzero(P[:i_max] < tolerance*P[i_max])[0][-1]
            x_lo = sopt.brentq(f, x[i_lo], x[i_lo+1])
        i_hi = i_max+np.nonzero(P[i_max:] < tolerance*P[i_max])[0][0]
        x_hi = sopt.brentq(f, x[i_hi-1], x[i_hi])
        return x_lo, x_hi


    def default_grid(self, n_points=6000, log_fraction=0.5):
        """Log-linear grid spanning the support of P_0."""
        x_lo, x_hi = self.support()
        return numerics.log_linear_grid(x_hi, n_points, x_min=x_lo, log_fraction=log_fraction)


    def projection(self, n_max, over_ground, check=True):
        """c_n = int phi_n(x) q(x) dx for n = 0..n_max, with q = P(x,0)/phi_0."""
        states = self.states(n_max)
        reach = self._ground*states[-1].wavefunction
        x_end = numerics.domain_end(self.omega, power=max(float(reach.effective_power_at_infinity())/2.0, 0.0))
        coefficients = np.zeros(n_max+1)
        for n, state in enumerate(states):
            f = lambda x : state.wavefunction.evaluate(x, self.omega)*over_ground(x)
            try:
                coefficients[n] = numerics.integrate(f, x_end, n_nodes=self._quadrature_nodes, check=check)
            except QuadratureNotConvergedError as e:
                self._handle_error(e)
                coefficients[n] = numerics.integrate(f, x_end, n_nodes=self._quadrature_nodes, check=False)
        return coefficients


def fp_from_prepotential(W, n_max=8, **kwargs):
    """FP model for the drift 2W'. W = W_l gives the deformed Rayleigh process with lambda_n = 4n*omega.

    Raises
    ------
    NonNormalizableError
        If exp(2W) is not integrable on (0, inf).
    """
    return FPModel(W, n_max=n_max, **kwargs)


class InitialDensity:
    """Normalized initial density P(x,0) on (0, inf).

    Subclasses implement values(x). over_ground(x) = P(x,0)/phi_0(x) is computed by division unless a
    subclass provides a closed form.
    """

    def __init__(self, model):
        self._model = model
        self._mass = 1.0
        self._mass = numerics.integrate(self, 2.0*model.support()[1], n_nodes=400, check=False)


    def values(self, x):
        raise NotImplementedError()


    def __call__(self, x):
        return self.values(x)/self._mass


    def over_ground(self, x):
        phi_0 = self._model.ground_state().evaluate(x, self._model.omega)
        P = self(x)
        return np.where(phi_0 > 1e-300, P/np.where(phi_0 > 1e-300, phi_0, 1.0), 0.0)


class BumpInitial(InitialDensity):
    """P_0(x) (1 + weight*exp(-(ln x - ln center)^2/(2 width^2))), normalized (a lognormal bump on P_0).

    Parameters
    ----------
    model : FPModel

    center : float, optional
        Defaults to sqrt(1.5/omega).

    width : float, optional
        Width in ln x. Defaults to 0.5.

    weight : float, optional
        Defaults to 1.
    """

    def __init__(self, model, center=None, width=0.5, weight=1.0):
        self.center = np.sqrt(1.5/model.omega) if center is None else center
        self.width = width
        self.weight = weight
        super().__init__(model)


    def _modulation(self, x):
        return 1.0+self.weight*np.exp(-(np.log(x)-np.log(self.center))**2/(2.0*self.width**2))


    def values(self, x):
        return self._model.stationary_density().evaluate(x, self._model.omega)*self._modulation(x)


    def over_ground(self, x):
        return self._model.ground_state().evaluate(x, self._model.omega)*self._modulation(x)/self._mass


class DilatedInitial(InitialDensity):
    """s P_0(s x), the stationary density rescaled in x (a slightly shifted stationary state for s near 1)."""

    def __init__(self, model, scale):
        self.scale = scale
        super().__init__(model)


    def values(self, x):
        return self.scale*self._model.stationary_density().evaluate(self.scale*np.asarray(x, dtype=float), self._model.omega)


class SampledInitial(InitialDensity):
    """Density given by grid samples, interpolated with a shape-preserving PCHIP interpolant and zero
    outside the sampled range."""

    def __init__(self, model, x, P):
        x = np.asarray(x, dtype=float)
        P = np.asarray(P, dtype=float)
        if np.any(P < 0.0):
            raise ParameterRangeError("P(x,0)", float(np.min(P)), "non-negative samples")
        self._interpolant = sinterp.PchipInterpolator(x, P, extrapolate=False)
        super().__init__(model)


    def values(self, x):
        return np.nan_to_num(self._interpolant(x), nan=0.0)


@dataclass
class GridDensity:
    """Density samples on a grid.

    Members
    -------
    x : ndarray

    values : ndarray

    t : float
    """
    x: np.ndarray
    values: np.ndarray
    t: float

    def mass(self):
        return float(sint.trapezoid(self.values, self.x))


    def l1_distance(self, other):
        """Trapezoid L1 distance to another density on the same grid (or an array of values)."""
        other_values = other.values if isinstance(other, GridDensity) else np.asarray(other)
        return float(sint.trapezoid(np.abs(self.values-other_values), self.x))


    def normalized(self):
        return GridDensity(self.x, self.values/self.mass(), self.t)


class FPSolution:
    """Spectral solution P(x,t) = phi_0(x) sum_n c_n phi_n(x) exp(-lambda_n t).

    Members
    -------
    model : FPModel

    coefficients : ndarray
        c_0..c_n_max.

    eigenvalues : ndarray
        lambda_0..lambda_n_max.

    initial : callable
        The initial density that was projected.
    """

    def __init__(self, model, coefficients, initial):
        self.model = model
        self.coefficients = np.asarray(coefficients)
        self.n_max = len(self.coefficients)-1
        self.eigenvalues = model.eigenvalues(self.n_max)
        self.initial = initial


    def density(self, x, t):
        """P(x,t) on an array of x > 0."""
        if t < 0.0:
            raise ParameterRangeError("t", t, "t >= 0")
        x = np.asarray(x, dtype=float)
        omega = self.model.omega
        total = np.zeros_like(x)
        for c, lam, state in zip(self.coefficients, self.eigenvalues, self.model.states(self.n_max)):
            total += c*np.exp(-lam*t)*state.wavefunction.evaluate(x, omega)
        return self.model.ground_state().evaluate(x, omega)*total


    def to_json(self):
        return {
            "model" : self.model.prepotential.to_json(),
            "c_n" : self.coefficients.tolist(),
            "lambda_n" : self.eigenvalues.tolist()
        }


def fp_expand(model, initial, **kwargs):
    """Projects the initial density onto the eigenmodes with adaptive truncation.

    n_max is the smallest index for which |c_n|/max|c| falls below the tail tolerance at n_max and
    n_max-1.

    Parameters
    ----------
    model : FPModel

    initial : InitialDensity or callable
        Normalized P(x,0).

    n_start : int, optional
        First truncation tried. Defaults to 8.

    verbose : bool, optional

    Returns
    -------
    FPSolution

    Raises
    ------
    TruncationNotConvergedError
        If the criterion fails up to the model's n_cap (subject to the error state).
    """
    verbose = kwargs.get("verbose", False)
    n_try = kwargs.get("n_start", 8)

    if isinstance(initial, InitialDensity):
        over_ground = initial.over_ground
    else:
        phi_0 = model.ground_state()
        def over_ground(x):
            ground = phi_0.evaluate(x, model.omega)
            safe = np.where(ground > 1e-300, ground, 1.0)
            return np.where(ground > 1e-300, initial(x)/safe, 0.0)

    if verbose:
        print("Projecting the initial density...")
        print("{0:<20}{1:<20}".format("Modes", "Tail Ratio"))
        print("".join(['-']*40))
        start_time = time.time()

    while True:
        coefficients = model.projection(n_try, over_ground)
        ratios = np.abs(coefficients)/np.max(np.abs(coefficients))
        small = ratios < model._tail_tolerance
        accepted = np.nonzero(small[1:] & small[:-1])[0]
        if verbose: print("{0:<20}{1:<20.4e}".format(n_try+1, ratios[-1]))
        if len(accepted) > 0:
            n_max = int(accepted[0])+1
            break
        if n_try >= model._n_cap:
            model._handle_error(TruncationNotConvergedError(n_try, ratios[-1]))
            n_max = n_try
            break
        n_try = min(2*n_try, model._n_cap)

    if verbose: print("Using {0} modes ({1:.3f} s)".format(n_max+1, time.time()-start_time))
    return FPSolution(model, coefficients[:n_max+1], initial)


def fp_evolve(solution, t, grid=None):
    """Spectral density at time t >= 0 on the grid (the model's default grid if omitted)."""
    if grid is None:
        grid = solution.model.default_grid()
    return GridDensity(grid, solution.density(grid, t), t)


def _bernoulli(z):
    # B(z) = z/(e^z-1)
    return 1.0/sspec.exprel(z)


class CrankNicolsonOracle:
    """Finite-volume Crank-Nicolson integrator for dP/dt = -d/dx(2W'P) + d^2P/dx^2.

    Fluxes use the Scharfetter-Gummel form J_{i+1/2} = [B(-d) P_i - B(d) P_{i+1}]/h_i with
    d = 2(W(x_{i+1}) - W(x_i)), so e^(2W) at the nodes is an exact discrete steady state. Both grid ends
    carry zero flux and the discrete mass sum(Delta_i P_i) is conserved.

    Parameters
    ----------
    model : FPModel

    grid : ndarray
        Strictly increasing nodes.

    dt : float
        Time step.

    rannacher : bool, optional
        Replace the first Crank-Nicolson step by two implicit Euler half steps. Defaults to True.
    """

    def __init__(self, model, grid, dt, rannacher=True):
        self.model = model
        self.x = np.asarray(grid, dtype=float)
        self.dt = dt
        self._rannacher = rannacher

        x = self.x
        h = np.diff(x)
        W = model.prepotential(x)
        delta = 2.0*np.diff(W)
        a = _bernoulli(-delta)/h
        b = _bernoulli(delta)/h

        # Control volumes
        self.volumes = np.empty_like(x)
        self.volumes[0] = 0.5*h[0]
        self.volumes[-1] = 0.5*h[-1]
        self.volumes[1:-1] = 0.5*(h[1:]+h[:-1])

        # dP/dt = A P with A tridiagonal
        N = len(x)
        self._diag = np.zeros(N)
        self._diag[:-1] -= a
        self._diag[1:] -= b
        self._diag /= self.volumes
        self._upper = b/self.volumes[:-1]
        self._lower = a/self.volumes[1:]


    def apply(self, P):
        """A P."""
        result = self._diag*P
        result[:-1] += self._upper*P[1:]
        result[1:] += self._lower*P[:-1]
        return result


    def stationary(self, mass=1.0):
        """Discrete steady state e^(2W(x_i)) with the given discrete mass."""
        W = self.model.prepotential(self.x)
        P = np.exp(2.0*(W-np.max(W)))
        return mass*P/np.dot(self.volumes, P)


    def mass(self, P):
        return float(np.dot(self.volumes, P))


    def _banded(self, theta_dt):
        # I - theta_dt*A in LAPACK banded storage
        ab = np.zeros((3, len(self.x)))
        ab[0,1:] = -theta_dt*self._upper
        ab[1,:] = 1.0-theta_dt*self._diag
        ab[2,:-1] = -theta_dt*self._lower
        return ab


    def evolve(self, P_initial, t, record_times=None, verbose=False):
        """Integrates from t = 0 to t.

        Parameters
        ----------
        P_initial : ndarray
            Values at the nodes.

        t : float

        record_times : list of float, optional
            Times at which snapshots are kept (rounded to the nearest step).

        Returns
        -------
        GridDensity
            Final state.

        list of GridDensity
            Snapshots at record_times (empty if none requested).
        """
        n_steps = int(round(t/self.dt))
        P = np.array(P_initial, dtype=float)
        record_steps = {int(round(tr/self.dt)) : tr for tr in (record_times or [])}
        history = []
        if 0 in record_steps:
            history.append(GridDensity(self.x, P.copy(), 0.0))

        # Shared by the Crank-Nicolson step and the implicit Euler half step
        matrix = self._banded(0.5*self.dt)
        if verbose:
            print("Crank-Nicolson: {0} steps of {1} on {2} nodes".format(n_steps, self.dt, len(self.x)))
            start_time = time.time()

        for step in range(1, n_steps+1):
            if step == 1 and self._rannacher:
                for _ in range(2):
                    P = sla.solve_banded((1, 1), matrix, P)
            else:
                P = sla.solve_banded((1, 1), matrix, P+0.5*self.dt*self.apply(P))

            if not np.all(np.isfinite(P)):
                raise NonFiniteSolutionError(step, step*self.dt)

            if step in record_steps:
                history.append(GridDensity(self.x, P.copy(), step*self.dt))

        if verbose: print("Done in {0:.3f} s".format(time.time()-start_time))
        return GridDensity(self.x, P, n_steps*self.dt), history


def fp_oracle_cn(model, initial, t, grid=None, dt=1e-3, **kwargs):
    """Crank-Nicolson solution at time t of the FP equation started from the initial density.

    Parameters
    ----------
    model : FPModel

    initial : callable
        P(x,0), sampled at the grid nodes.

    t : float

    grid : ndarray, optional
        Defaults to the model's log-linear grid over the support of P_0.

    dt : float, optional
        Defaults to 1e-3.

    Returns
    -------
    GridDensity
    """
    if grid is None:
        grid = model.default_grid()
    oracle = CrankNicolsonOracle(model, grid, dt, rannacher=kwargs.get("rannacher", True))
    final, _ = oracle.evolve(initial(oracle.x), t, verbose=kwargs.get("verbose", False))
    return final


def decay_rate_fit(oracle, P_initial, t_window=(1.5, 3.0), n_samples=16):
    """Slowest decay rate from a log-linear fit of the L1 distance to the discrete steady state.

    Parameters
    ----------
    oracle : CrankNicolsonOracle

    P_initial : ndarray
        Initial values at the oracle nodes.

    t_window : tuple, optional
        Fit window in units of 1/omega. Defaults to (1.5, 3.0).

    Returns
    -------
    float
        Fitted rate (4*omega for the Laguerre families).
    """
    omega = oracle.model.omega
    times = np.linspace(t_window[0]/omega, t_window[1]/omega, n_samples)
    _, history = oracle.evolve(P_initial, times[-1], record_times=times)
    steady = oracle.stationary(oracle.mass(P_initial))
    t = np.array([snapshot.t for snapshot in history])
    distance = np.array([snapshot.l1_distance(steady) for snapshot in history])
    slope, _ = np.polyfit(t, np.log(distance), 1)
    return -slope


def stationary_residual(model, n_points=4000):
    """Sup-norm of the FP operator applied to the closed-form P_0, from central differences at h and h/2
    combined by Richardson extrapolation."""
    x_lo, x_hi = model.support()
    P_0 = lambda x : model.stationary_density().evaluate(x, model.omega)

    x = np.linspace(x_lo, x_hi, n_points)[1:-1]
    h = x[1]-x[0]
    coarse = model.operator(P_0, x, h)
    fine = model.operator(P_0, x, 0.5*h)
    return float(np.max(np.abs((4.0*fine-coarse)/3.0)))
