"""Radial Dirac and Dirac-Pauli systems whose SUSY reduction lands on the sqm Hamiltonians.

For a cylindrical magnetic field (minimal coupling) the radial pair is built
from W'(r) = g/r - A_phi(r) with g = m+1/2. The central Dirac-Pauli coupling
uses W'(r) = g/r - mu*E_r(r) with g = |k|, and the cylindrical Dirac-Pauli
coupling is the same machinery with mu*E_r in place of A_phi. The 1+1
dimensional Dirac equation with a Lorentz scalar potential uses
W'(x) = -(V_s(x)+M). Units c = hbar = 1 and unit charge.

Only the normalizable branch m >= 0 (k < 0) is implemented.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from xlaguerre.polycore import Family, ModelParams, HALF, to_rational, rational_to_str
from xlaguerre.structured import RationalQ, StructuredFn
from xlaguerre.sqm import (Hamiltonian, prepotential_Wl_deformed, prepotential_Wl_dc, eigensystem_for,
                           dc_offset_units, susy_apply)
from xlaguerre.exceptions import ParameterRangeError, UnimplementedBranchError
from xlaguerre import numerics


class CouplingKind(enum.Enum):
    MINIMAL_MAGNETIC = "minimal-magnetic"
    PAULI_CENTRAL_ELECTRIC = "pauli-central-electric"
    PAULI_CYLINDRICAL_ELECTRIC = "pauli-cylindrical-electric"
    LORENTZ_SCALAR_1D = "lorentz-scalar-1d"


class SusyPhase(enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"


class ReducedPotential:
    """Potential W'^2 + W'' of the reduced Hamiltonian for the profiles that are not built from a
    Laguerre-family prepotential (constant and 1/r vector potentials)."""

    def __init__(self, g, A, dA):
        self._g = float(g)
        self._A = A
        self._dA = dA


    def potential(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0):
            raise ParameterRangeError("r", float(np.min(r)), "r > 0 (open half-line)")
        W_prime = self._g/r-self._A(r)
        W_second = -self._g/(r*r)-self._dA(r)
        return W_prime*W_prime+W_second


    def centrifugal_coefficient(self):
        return self._g*(self._g-1.0)


@dataclass
class CouplingProfile:
    """Radial coupling profile together with the data of its SUSY reduction.

    Members
    -------
    kind : CouplingKind

    g : Fraction
        m+1/2 (minimal, cylindrical) or |k| (central).

    label : dict
        Quantum labels, {"m": m} or {"k": k}.

    construction : str
        "deformed", "dc", "coulomb", "zero-field" or "scalar".

    profile : StructuredFn or None
        A_phi(r) (or mu*E_r) = R(eta)/r for the Laguerre families.

    prepotential : Prepotential or None

    params : ModelParams or None

    omega : float

    strength : float or None
        B for the constant profile, c for the c/r profile.

    is_dirac_oscillator : bool
        Set for central coupling with mu*E_r proportional to r.
    """
    kind: CouplingKind
    g: object
    label: dict
    construction: str
    profile: object = None
    prepotential: object = None
    params: object = None
    omega: float = 1.0
    strength: object = None
    is_dirac_oscillator: bool = False

    @property
    def susy(self):
        if self.construction in ("dc", "zero-field"):
            return SusyPhase.BROKEN
        return SusyPhase.UNBROKEN


    def evaluate(self, r):
        """A_phi(r) (or mu*E_r(r)) for r > 0."""
        r = np.asarray(r, dtype=float)
        if self.profile is not None:
            return self.profile.evaluate(r, self.omega)
        if self.construction == "coulomb":
            return np.full_like(r, self.strength) if r.ndim else float(self.strength)
        return self.strength/r


    def rebuilt_derivative(self):
        """w(eta) with W'(r) = w/r rebuilt as g - r*A_phi(r)."""
        if self.profile is None:
            raise ValueError("Only Laguerre-family profiles carry a closed-form prepotential.")
        return RationalQ(to_rational(self.g))-self.profile.R


    def reduced_hamiltonian(self):
        """The Hamiltonian A^- A^+ whose eigenvalues are E^2 - M^2."""
        if self.prepotential is not None:
            return Hamiltonian(self.prepotential, 1)
        if self.construction == "coulomb":
            B = float(self.strength)
            return ReducedPotential(self.g, lambda r : B+0.0*r, lambda r : 0.0*r)
        c = float(self.strength)
        return ReducedPotential(self.g, lambda r : c/r, lambda r : -c/(r*r))


    def to_json(self):
        data = {
            "kind" : self.kind.value,
            "g" : rational_to_str(self.g),
            "label" : self.label,
            "construction" : self.construction,
            "susy" : self.susy.value,
            "omega" : self.omega,
            "is_dirac_oscillator" : self.is_dirac_oscillator
        }
        if self.profile is not None:
            data["profile"] = self.profile.to_json()
        if self.params is not None:
            data["params"] = self.params.to_json()
        if self.strength is not None:
            data["strength"] = float(self.strength)
        return data


def _check_m(m):
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise ParameterRangeError("m", m, "an integer")
    if m < 0:
        raise UnimplementedBranchError("m < 0")
    return int(m)


def _check_k(k):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise ParameterRangeError("k", k, "an integer")
    if k == 0:
        raise ParameterRangeError("k", k, "k = +/-(j+1/2) with j half-odd, never 0")
    if k > 0:
        raise UnimplementedBranchError("k > 0")
    return int(k)


def _laguerre_profile(kind, W, g, label, construction):
    # A(r) = g/r - W'(r) = (g - w(eta))/r
    R = RationalQ(to_rational(g))-W.derivative
    return CouplingProfile(kind, to_rational(g), label, construction, profile=StructuredFn(0, -1, R),
                           prepotential=W, params=W.params, omega=W.omega)


def _build(kind, params, g, label, choice):
    if choice == "deformed":
        return _laguerre_profile(kind, prepotential_Wl_deformed(params.with_g(g)), g, label, "deformed")
    if choice == "dc":
        return _laguerre_profile(kind, prepotential_Wl_dc(params.with_g(g, check_dc_range=True)), g, label, "dc")
    if choice == "oscillator":
        oscillator = ModelParams(params.family, 0, g, params.omega, check_dc_range=False)
        return _laguerre_profile(kind, prepotential_Wl_deformed(oscillator), g, label, "deformed")
    raise ParameterRangeError("profile", choice, "one of 'deformed', 'dc' or 'oscillator'")


def vector_potential_deformed(params, m):
    """Vector potential A_phi^(l) whose radial problem is the deformed oscillator with g = m+1/2.

    A_phi(r) = omega*r - [l/r + d/dr log xi_l(eta;g+1) - d/dr log xi_l(eta;g)]; l = 0 is the
    Landau problem A_phi = omega*r.

    Raises
    ------
    UnimplementedBranchError
        If m < 0.

    SingularDeformationError
        If a deforming polynomial has zeros on (0, inf).
    """
    m = _check_m(m)
    return _build(CouplingKind.MINIMAL_MAGNETIC, params, m+HALF, {"m" : m}, "deformed")


def vector_potential_dc(params, m):
    """Vector potential determined by the Darboux-Crum prepotential with g = m+1/2 (broken SUSY).

    L1: -omega*r - (l-1)/r - d/dr log xi_l(eta;g); L2: omega*r + (2g+l)/r - d/dr log xi_l(eta;g).
    """
    m = _check_m(m)
    return _build(CouplingKind.MINIMAL_MAGNETIC, params, m+HALF, {"m" : m}, "dc")


def vector_potential_classical(kind, m, strength=1.0):
    """Classical profiles: "oscillator" (A_phi = strength*r, Landau levels), "coulomb"
    (A_phi = strength, constant) and "zero-field" (A_phi = strength/r, no bound states)."""
    m = _check_m(m)
    g = m+HALF
    if kind == "oscillator":
        params = ModelParams(Family.L1, 0, g, strength, check_dc_range=False)
        return vector_potential_deformed(params, m)
    if not float(strength) > 0.0:
        raise ParameterRangeError("strength", strength, "strength > 0 (positive flux integral)")
    if kind == "coulomb":
        return CouplingProfile(CouplingKind.MINIMAL_MAGNETIC, g, {"m" : m}, "coulomb", strength=float(strength))
    if kind == "zero-field":
        return CouplingProfile(CouplingKind.MINIMAL_MAGNETIC, g, {"m" : m}, "zero-field", strength=float(strength))
    raise ParameterRangeError("kind", kind, "one of 'oscillator', 'coulomb' or 'zero-field'")


def pauli_central(params, k, choice="deformed"):
    """Central Dirac-Pauli coupling mu*E_r with g = |k| (k < 0).

    choice "oscillator" (or "deformed" with l = 0) is the Dirac oscillator mu*E_r = omega*r;
    "deformed" with l >= 1 gives the deformed Dirac oscillators; "dc" uses the Darboux-Crum prepotential.
    """
    k = _check_k(k)
    profile = _build(CouplingKind.PAULI_CENTRAL_ELECTRIC, params, abs(k), {"k" : k}, choice)
    profile.is_dirac_oscillator = profile.construction == "deformed" and profile.params.ell == 0
    return profile


def pauli_cylindrical(params, m, choice="deformed"):
    """Cylindrical Dirac-Pauli coupling, identical to minimal coupling with mu*E_r in place of A_phi."""
    m = _check_m(m)
    return _build(CouplingKind.PAULI_CYLINDRICAL_ELECTRIC, params, m+HALF, {"m" : m}, choice)


def magnetic_field_closed_form(profile):
    """B_3(r) = (1/r) d(r A_phi)/dr = 2*eta*R'(eta)/r^2 for A_phi = R(eta)/r."""
    if profile.profile is None:
        raise ValueError("Closed forms are available for Laguerre-family profiles only.")
    return StructuredFn(0, -2, profile.profile.R.diff().times_eta(1)*2)


def magnetic_field(profile, r):
    """B_3 evaluated at r > 0."""
    r = np.asarray(r, dtype=float)
    if profile.profile is not None:
        return magnetic_field_closed_form(profile).evaluate(r, profile.omega)
    if profile.construction == "coulomb":
        return profile.strength/r
    return np.zeros_like(r) if r.ndim else 0.0


@dataclass(frozen=True)
class DiracLevel:
    n: int
    eigenvalue: float
    energy: float


@dataclass(frozen=True)
class DiracSpectrum:
    """Levels (n, E^2-M^2, E) of a radial Dirac system (E^2 and E for the 1+1 dimensional scalar case)."""
    mass: float
    levels: tuple
    susy: SusyPhase

    def energies(self):
        return np.array([level.energy for level in self.levels])


    def to_json(self, profile=None):
        data = {
            "M" : self.mass,
            "susy" : self.susy.value,
            "levels" : [{"n" : level.n, "E2_minus_M2" : level.eigenvalue, "E" : level.energy} for level in self.levels]
        }
        if profile is not None:
            data["kind"] = profile.kind.value
            data["params"] = profile.params.to_json() if profile.params is not None else None
            data["profile"] = profile.to_json()
        return data


def _check_mass(M):
    if not float(M) >= 0.0:
        raise ParameterRangeError("M", M, "M >= 0")
    return float(M)


def reduced_eigenvalues(profile, n_max):
    """E^2 - M^2 for n = 0..n_max."""
    if profile.construction == "zero-field":
        return []
    if profile.construction == "coulomb":
        B = profile.strength
        g = float(profile.g)
        return [B*B*n*(n+2.0*g)/(n+g)**2 for n in range(n_max+1)]
    if profile.construction == "dc":
        offset = dc_offset_units(profile.params)
        return [float(4*n+offset)*profile.omega for n in range(n_max+1)]
    return [4.0*n*profile.omega for n in range(n_max+1)]


def dirac_spectrum(profile, M, n_max):
    """Spectrum E_n = sqrt(M^2 + lambda_n) of the radial Dirac system.

    Parameters
    ----------
    profile : CouplingProfile
        Built by one of the constructors in this module.

    M : float
        Mass, M >= 0.

    n_max : int

    Returns
    -------
    DiracSpectrum
    """
    M = _check_mass(M)
    levels = tuple(DiracLevel(n, lam, float(np.sqrt(M*M+lam))) for n, lam in enumerate(reduced_eigenvalues(profile, n_max)))
    return DiracSpectrum(M, levels, profile.susy)


@dataclass
class DiracState:
    """Two-component radial state.

    Members
    -------
    n : int

    energy : float

    upper : StructuredFn
        f_+.

    lower : StructuredFn
        f_-.

    coefficients : tuple
        (c+, c-) in A^+ f_+ = c+ f_-, A^- f_- = c- f_+; (E+M, E-M) radially, (E, E) in 1+1 dimensions.
    """
    n: int
    energy: float
    upper: StructuredFn
    lower: StructuredFn
    coefficients: tuple = field(default=(0.0, 0.0))

    def norm_ratio(self, omega):
        """||f_-||/||f_+||."""
        upper = numerics.integrate_structured(self.upper*self.upper, omega)
        if self.lower.is_zero():
            return 0.0
        lower = numerics.integrate_structured(self.lower*self.lower, omega)
        return float(np.sqrt(lower/upper))


def _pair_state(W, f_plus, n, energy, c_plus, c_minus):
    # f_- = A^+ f_+/c+, then both components scaled so that int f_+^2 + f_-^2 = 1
    if c_plus == 0.0:
        raise ParameterRangeError("E+M", c_plus, "E+M != 0 (the massless zero mode has no partner component)")
    f_minus = susy_apply(1, W, f_plus).scaled(1.0/c_plus)
    norm_sq = numerics.integrate_structured(f_plus*f_plus, W.omega)
    if not f_minus.is_zero():
        norm_sq += numerics.integrate_structured(f_minus*f_minus, W.omega)
    scale = 1.0/np.sqrt(norm_sq)
    return DiracState(n, energy, f_plus.scaled(scale), f_minus.scaled(scale), (c_plus, c_minus))


def dirac_state(profile, M, n):
    """Radial state n with f_+ from the matching sqm eigenfunction and f_- = A^+ f_+/(E+M).

    f_+ is positive as r -> 0+.

    Raises
    ------
    ParameterRangeError
        If E+M = 0.
    """
    M = _check_mass(M)
    if profile.prepotential is None:
        raise ValueError("Closed-form states are available for Laguerre-family profiles only.")
    lam = reduced_eigenvalues(profile, n)[n]
    E = float(np.sqrt(M*M+lam))
    f_plus = eigensystem_for(profile.prepotential, n)[n].wavefunction
    return _pair_state(profile.prepotential, f_plus, n, E, E+M, E-M)


def pair_residual(prepotential, state, grid=None):
    """Relative sup-norm residual of A^+ f_+ = c+ f_- and A^- f_- = c- f_+ on a grid."""
    omega = prepotential.omega
    if grid is None:
        x_max = numerics.domain_end(omega, power=max(float(state.upper.effective_power_at_infinity())/2.0, 0.0), rate=0.5)
        grid = numerics.log_linear_grid(x_max, 2000, x_min=1e-3)
    c_plus, c_minus = state.coefficients

    residual = 0.0
    for sign, f, h, c in ((1, state.upper, state.lower, c_plus), (-1, state.lower, state.upper, c_minus)):
        left = susy_apply(sign, prepotential, f).evaluate(grid, omega)
        right = c*h.evaluate(grid, omega)
        scale = max(np.max(np.abs(left)), np.max(np.abs(right)))
        if scale > 0.0:
            residual = max(residual, float(np.max(np.abs(left-right))/scale))
    return residual


@dataclass
class ScalarDiracSolution:
    """1+1 dimensional Dirac system with a Lorentz scalar potential.

    Members
    -------
    prepotential : Prepotential

    mass : float

    spectrum : DiracSpectrum
        Both signs +/-sqrt(E^2); the zero level is unpaired.

    states : list of DiracState
    """
    prepotential: object
    mass: float
    spectrum: DiracSpectrum
    states: list

    def scalar_potential(self, x):
        """V_s(x) = -W'(x) - M."""
        return -self.prepotential.evaluate_derivative(x)-self.mass


    def scalar_potential_closed_form(self):
        """V_s + M = -w(eta)/x as a StructuredFn."""
        return StructuredFn(0, -1, -self.prepotential.derivative)


def scalar_1d(prepotential, M, n_max=5):
    """Dirac equation in 1+1 dimensions with V_s = -W' - M, solved through the SUSY pair of W."""
    M = _check_mass(M)
    states = []
    levels = []
    for state in eigensystem_for(prepotential, n_max):
        calE = state.energy
        f_plus = state.wavefunction
        if calE == 0.0:
            states.append(DiracState(state.n, 0.0, f_plus, susy_apply(1, prepotential, f_plus), (0.0, 0.0)))
            levels.append(DiracLevel(state.n, 0.0, 0.0))
            continue
        E = float(np.sqrt(calE))
        for energy in (E, -E):
            states.append(_pair_state(prepotential, f_plus, state.n, energy, energy, energy))
            levels.append(DiracLevel(state.n, calE, energy))

    susy = SusyPhase.UNBROKEN if prepotential.is_normalizable() else SusyPhase.BROKEN
    return ScalarDiracSolution(prepotential, M, DiracSpectrum(M, tuple(levels), susy), states)


def sample_state(state, omega, grid):
    """Columns (r, f_+, f_-) on the grid."""
    return np.column_stack((grid, state.upper.evaluate(grid, omega), state.lower.evaluate(grid, omega)))
