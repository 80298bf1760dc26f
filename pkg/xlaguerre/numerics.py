"""Numerical kernels shared by the closed-form modules: grids, Gauss quadrature on the
half-line and the finite-difference spectrum oracle."""

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.optimize as sopt

from xlaguerre.exceptions import QuadratureNotConvergedError, SturmCountError, ParameterRangeError
from xlaguerre.helpers import write_csv


TAIL_TOLERANCE = 1e-16
MIN_FD_POINTS = 1000


def log_linear_grid(x_max, n_points, x_min=1e-6, log_fraction=0.2):
    """Grid on (0, x_max] that is log-spaced from x_min to 1 and linear beyond x = 1.

    Parameters
    ----------
    x_max : float
        Right end of the grid.

    n_points : int
        Total number of points.

    x_min : float, optional
        First grid point. Defaults to 1e-6.

    log_fraction : float, optional
        Share of the points placed in the logarithmic part. Defaults to 0.2.

    Returns
    -------
    ndarray
        Strictly increasing grid.
    """
    if x_min <= 0.0 or x_max <= x_min:
        raise ParameterRangeError("x_min, x_max", (x_min, x_max), "0 < x_min < x_max")

    if x_max <= 1.0:
        return np.logspace(np.log10(x_min), np.log10(x_max), n_points)

    n_log = max(int(n_points*log_fraction), 2)
    n_lin = max(n_points-n_log, 2)
    if x_min >= 1.0:
        return np.linspace(x_min, x_max, n_points)
    log_part = np.logspace(np.log10(x_min), 0.0, n_log, endpoint=False)
    lin_part = np.linspace(1.0, x_max, n_lin)
    return np.concatenate((log_part, lin_part))


def tail_cutoff(power, rate=1.0, tolerance=TAIL_TOLERANCE, extra=0.0):
    """Returns eta_end such that exp(-rate*eta)*eta^power beyond eta_end is below tolerance times
    its maximum on (0, inf).

    Parameters
    ----------
    power : float
        Exponent of eta in the integrand tail.

    rate : float, optional
        Decay rate of the exponential. Defaults to 1.

    tolerance : float, optional
        Relative size of the neglected tail. Defaults to 1e-16.

    extra : float, optional
        Additional margin added to the exponent, e.g. lambda_max/omega. Defaults to 0.
    """
    target = np.log(1.0/tolerance)+extra
    power = float(power)
    if power <= 0.0:
        return target/rate

    eta_peak = power/rate
    peak = rate*eta_peak-power*np.log(eta_peak)
    f = lambda eta : rate*eta-power*np.log(eta)-peak-target
    upper = 2.0*eta_peak+target/rate+1.0
    while f(upper) < 0.0:
        upper *= 2.0
    return sopt.brentq(f, eta_peak, upper, xtol=1e-10)


def domain_end(omega, power=0.0, rate=1.0, tolerance=TAIL_TOLERANCE, extra=0.0):
    """Right end x_end = sqrt(eta_end/omega) of the integration domain for an integrand whose tail
    behaves as exp(-rate*omega*x^2)*(omega*x^2)^power."""
    return np.sqrt(tail_cutoff(power, rate=rate, tolerance=tolerance, extra=extra)/omega)


@dataclass
class Quadrature:
    """Gauss-Legendre rule mapped to (0, domain_end].

    Members
    -------
    nodes : ndarray

    weights : ndarray
        All positive.

    accuracy : float
        Declared relative accuracy used by the node-doubling check.

    domain_end : float
    """
    nodes: np.ndarray
    weights: np.ndarray
    accuracy: float
    domain_end: float

    def integrate(self, f):
        """Integrates the callable f (vectorized over x)."""
        return float(np.dot(self.weights, f(self.nodes)))


def gauss_quad(domain_end, n_nodes=200, accuracy=1e-12):
    """Gauss-Legendre quadrature on (0, domain_end].

    The nodes are mapped through x = domain_end*u^2, u in (0, 1], which clusters them near x = 0
    where the integrands behave as non-integer powers of x.

    Parameters
    ----------
    domain_end : float
        Right end of the domain, usually from domain_end().

    n_nodes : int, optional
        Number of nodes. Defaults to 200.

    accuracy : float, optional
        Declared relative accuracy. Defaults to 1e-12.

    Returns
    -------
    Quadrature
    """
    u, w = np.polynomial.legendre.leggauss(n_nodes)
    u = 0.5*(u+1.0)
    w = 0.5*w
    nodes = domain_end*u*u
    weights = 2.0*domain_end*u*w
    return Quadrature(nodes, weights, accuracy, domain_end)


def integrate(f, domain_end, n_nodes=200, accuracy=1e-12, check=True):
    """Integrates f over (0, domain_end] with node doubling as the convergence check.

    Raises
    ------
    QuadratureNotConvergedError
        If doubling the number of nodes changes the result by more than accuracy*max(1, |I|).
    """
    fine = gauss_quad(domain_end, 2*n_nodes, accuracy).integrate(f)
    if not check:
        return fine
    coarse = gauss_quad(domain_end, n_nodes, accuracy).integrate(f)
    change = abs(fine-coarse)
    if change > accuracy*max(1.0, abs(fine)):
        raise QuadratureNotConvergedError(change, accuracy)
    return fine


def integrate_structured(f, omega, n_nodes=200, accuracy=1e-12, check=True):
    """Integrates a gaussian-decaying StructuredFn f over (0, inf)."""
    if not f.a < 0:
        raise ValueError("Only functions with a decaying gaussian factor can be integrated on (0, inf).")
    if f.is_zero():
        return 0.0
    end = domain_end(omega, power=max(float(f.effective_power_at_infinity())/2.0, 0.0), rate=-float(f.a)/2.0)
    return integrate(lambda x : f.evaluate(x, omega), end, n_nodes=n_nodes, accuracy=accuracy, check=check)


def inner_product(f, h, omega, n_nodes=200, accuracy=1e-12, check=True):
    """L2 inner product of two StructuredFns on (0, inf)."""
    return integrate_structured(f*h, omega, n_nodes=n_nodes, accuracy=accuracy, check=check)


def gram_matrix(functions, omega, n_nodes=200):
    """Matrix of pairwise L2 inner products."""
    n = len(functions)
    G = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i,j] = inner_product(functions[i], functions[j], omega, n_nodes=n_nodes, check=False)
            G[j,i] = G[i,j]
    return G


@dataclass
class FDHamiltonian:
    """Second-order finite-difference discretization of -d^2/dx^2 + V(x) with Dirichlet ends.

    Members
    -------
    x : ndarray
        Interior nodes.

    h : float
        Grid spacing.

    diagonal : ndarray
        2/h^2 + V(x_i).

    off_diagonal : ndarray
        -1/h^2.
    """
    x: np.ndarray
    h: float
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    @property
    def N(self):
        return len(self.x)


    def sturm_count(self, value):
        """Number of eigenvalues strictly below value, from the signs of the LDL^T pivots."""
        return sturm_count(self.diagonal, self.off_diagonal, value)


def fd_hamiltonian(V, N, x_max, x_min):
    """Builds the FDHamiltonian for the potential V on N interior nodes of (x_min, x_max)."""
    h = (x_max-x_min)/(N+1)
    x = x_min+h*np.arange(1, N+1)
    diagonal = 2.0/(h*h)+V(x)
    off_diagonal = np.full(N-1, -1.0/(h*h))
    return FDHamiltonian(x, h, diagonal, off_diagonal)


def sturm_count(diagonal, off_diagonal, value):
    # Counts negative pivots of T - value*I
    count = 0
    q = diagonal[0]-value
    if q < 0.0:
        count += 1
    for i in range(1, len(diagonal)):
        if q == 0.0:
            q = 1e-300
        q = diagonal[i]-value-off_diagonal[i-1]**2/q
        if q < 0.0:
            count += 1
    return count


def _lowest_eigenvalues(H, k):
    # Bisection (LAPACK stebz) for the k lowest eigenvalues, checked against Sturm counts
    eigs = sla.eigh_tridiagonal(H.diagonal, H.off_diagonal, eigvals_only=True, select='i',
                                select_range=(0, k-1), lapack_driver='stebz')

    scale = max(1.0, np.max(np.abs(eigs)))
    trials = [eigs[0]-1e-8*scale]+[0.5*(eigs[j]+eigs[j+1]) for j in range(k-1)]
    for j, trial in enumerate(trials):
        found = H.sturm_count(trial)
        if found != j:
            raise SturmCountError(j, found)
    return eigs


def _potential_callable(H):
    if callable(getattr(H, "potential", None)):
        return H.potential
    if callable(H):
        return H
    raise TypeError("fd_eigs needs a Hamiltonian or a callable potential, got {0}.".format(type(H)))


def default_x_min(H, x_max, tolerance=1e-14):
    """Dirichlet end x_min such that a solution behaving as x^s near 0 is below tolerance there.

    The exponent s is read off the centrifugal coefficient c in V ~ c/x^2, c = s(s-1).
    """
    c = H.centrifugal_coefficient() if hasattr(H, "centrifugal_coefficient") else 0.0
    s = max(0.5*(1.0+np.sqrt(1.0+4.0*max(float(c), -0.25))), 1.0)
    return min(tolerance**(1.0/s), 1e-3*x_max)


def fd_eigs(H, N, x_max, k, x_min=None, richardson=True):
    """Lowest k eigenvalues of -d^2/dx^2 + V on (x_min, x_max) with Dirichlet ends.

    Eigenvalues come from bisection on the symmetric tridiagonal matrix and every index is verified
    by a Sturm count. With richardson=True the grid is refined h -> h/2 and the O(h^2) error is
    extrapolated away.

    Parameters
    ----------
    H : Hamiltonian or callable
        Anything with a potential(x) method, or the potential itself.

    N : int
        Number of interior nodes on the coarse grid, at least MIN_FD_POINTS. The convergence ladder
        builds its coarser grids directly.

    x_max : float
        Right Dirichlet end.

    k : int
        Number of eigenvalues.

    x_min : float, optional
        Left Dirichlet end. Chosen from the centrifugal term of H if not given.

    richardson : bool, optional
        Defaults to True.

    Returns
    -------
    ndarray
        The k lowest eigenvalues in ascending order.

    Raises
    ------
    ParameterRangeError
        If N < MIN_FD_POINTS.

    SturmCountError
        If the bisection results and the Sturm counts disagree.
    """
    V = _potential_callable(H)
    if N < MIN_FD_POINTS:
        raise ParameterRangeError("N", N, "N >= {0} (finite-difference oracle)".format(MIN_FD_POINTS))
    if x_min is None:
        x_min = default_x_min(H, x_max)

    coarse = _lowest_eigenvalues(fd_hamiltonian(V, N, x_max, x_min), k)
    if not richardson:
        return coarse

    # N -> 2N+1 interior nodes halves h exactly
    fine = _lowest_eigenvalues(fd_hamiltonian(V, 2*N+1, x_max, x_min), k)
    return (4.0*fine-coarse)/3.0


def fd_convergence_ladder(H, N, x_max, k, exact, levels=3, x_min=None, verbose=False):
    """Measures the observed order of the unextrapolated FD eigenvalues on an h, h/2, h/4, ... ladder.

    Parameters
    ----------
    exact : array_like
        Reference values of the k lowest eigenvalues.

    levels : int, optional
        Number of grids. Defaults to 3.

    Returns
    -------
    dict
        "h", "errors" (levels x k) and "orders" (levels-1 x k) as lists.
    """
    V = _potential_callable(H)
    if x_min is None:
        x_min = default_x_min(H, x_max)
    exact = np.asarray(exact, dtype=float)

    if verbose:
        print("{0:<20}{1:<20}{2:<20}".format("N", "h", "Max Error"))
        print("".join(['-']*60))

    hs = []
    errors = []
    n_nodes = N
    for _ in range(levels):
        start_time = time.time()
        H_fd = fd_hamiltonian(V, n_nodes, x_max, x_min)
        eigs = _lowest_eigenvalues(H_fd, k)
        hs.append(H_fd.h)
        errors.append(np.abs(eigs-exact))
        if verbose: print("{0:<20}{1:<20.6e}{2:<20.6e} ({3:.2f} s)".format(n_nodes, H_fd.h, np.max(errors[-1]), time.time()-start_time))
        n_nodes = 2*n_nodes+1

    errors = np.array(errors)
    hs = np.array(hs)
    orders = np.log(errors[:-1]/errors[1:])/np.log(hs[:-1]/hs[1:])[:,np.newaxis]
    return {"h" : hs.tolist(), "errors" : errors.tolist(), "orders" : orders.tolist()}


def write_convergence_csv(filename, ladder):
    """Dumps a convergence ladder as CSV with one row per (grid, level index)."""
    rows = []
    orders = ladder["orders"]
    for i, (h, errors) in enumerate(zip(ladder["h"], ladder["errors"])):
        for j, error in enumerate(errors):
            rows.append([float(h), j, float(error), float(orders[i-1][j]) if i > 0 else ""])
    write_csv(filename, ["h", "index", "error", "order"], rows)
