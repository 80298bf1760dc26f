"""Prepotentials, Hamiltonians, SUSY operators and closed-form eigensystems.

Conventions: A^(+/-) = +/- d/dx - W'(x). The Hamiltonian with sign +1 is
A^- A^+ = -d^2/dx^2 + W'^2 + W'' (ground state e^W when normalizable), the
one with sign -1 is A^+ A^- = -d^2/dx^2 + W'^2 - W''. Energies are stored in
units of omega (EigenState.energy_units) next to their values.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from xlaguerre.polycore import PolyQ, Family, ModelParams, HALF, laguerre, deforming_xi, exceptional_P, to_rational, rational_to_str
from xlaguerre.structured import RationalQ, StructuredFn, common_denominator
from xlaguerre.exceptions import ParameterRangeError, SingularDeformationError, NonNormalizableError
from xlaguerre import numerics


ETA = RationalQ(PolyQ.eta())


def _parse_sign(sign):
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError("Sign must be +1 or -1, got {0}.".format(sign))


@dataclass(frozen=True)
class Prepotential:
    """W(x) = a*omega*x^2/2 + b*log(x) + sum_i s_i*log(xi_i(eta)).

    Parameters
    ----------
    a : int or Fraction
        Sign of the gaussian term, -1 or +1.

    b : Fraction or float
        Coefficient of log(x).

    terms : tuple of (int, PolyQ)
        Signed deforming polynomials. Each must be zero-free on (0, inf).
        Constant polynomials are dropped.

    omega : float

    kind : str
        Provenance: "radial", "deformed", "dc" or "custom".

    params : ModelParams or None
        Parameters the prepotential was built from.
    """
    a: object
    b: object
    terms: tuple = ()
    omega: float = 1.0
    kind: str = field(default="custom", compare=False)
    params: object = field(default=None, compare=False)

    def __post_init__(self):
        a = to_rational(self.a)
        if a not in (-1, 1):
            raise ParameterRangeError("a", a, "a = -1 or a = +1")
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", to_rational(self.b))
        if not float(self.omega) > 0.0:
            raise ParameterRangeError("omega", self.omega, "omega > 0")
        object.__setattr__(self, "omega", float(self.omega))

        terms = []
        for sign, xi in self.terms:
            sign = _parse_sign(sign)
            if xi.degree() <= 0:
                continue
            n_roots = xi.count_positive_roots()
            if n_roots > 0:
                if self.params is None:
                    raise SingularDeformationError("custom", xi.degree(), "-", n_roots)
                raise SingularDeformationError(self.params.family.value, xi.degree(), rational_to_str(self.params.g), n_roots)
            terms.append((sign, xi))
        object.__setattr__(self, "terms", tuple(terms))


    @property
    def exact(self):
        return isinstance(self.b, Fraction) and all(xi.exact for _, xi in self.terms)


    @cached_property
    def derivative(self):
        """w(eta) with W'(x) = w(eta)/x."""
        w = ETA*self.a+self.b
        for sign, xi in self.terms:
            w = w+RationalQ(xi.diff().shift_degree(1), xi)*(2*sign)
        return w


    @cached_property
    def second_derivative(self):
        """u(eta) with W''(x) = u(eta)/x^2."""
        w = self.derivative
        return -w+w.diff().times_eta(1)*2


    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        eta = self.omega*x*x
        W = float(self.a)*eta/2.0+float(self.b)*np.log(x)
        for sign, xi in self.terms:
            W = W+sign*np.log(np.abs(xi(eta)))
        return W


    def evaluate_derivative(self, x):
        """W'(x) for x > 0."""
        x = np.asarray(x, dtype=float)
        return self.derivative(self.omega*x*x)/x


    def ground_state(self):
        """e^W as an unnormalized StructuredFn."""
        num = PolyQ([Fraction(1)])
        den = PolyQ([Fraction(1)])
        for sign, xi in self.terms:
            if sign > 0:
                num = num*xi
            else:
                den = den*xi
        return StructuredFn(self.a, self.b, RationalQ(num, den))


    def density(self):
        """e^(2W) as an unnormalized StructuredFn."""
        ground = self.ground_state()
        return ground*ground


    def is_normalizable(self):
        """Whether e^W is square-integrable on (0, inf): gaussian sign - and b > -1/2."""
        return self.ground_state().is_square_integrable()


    def to_json(self):
        return {
            "a" : rational_to_str(self.a),
            "b" : rational_to_str(self.b),
            "terms" : [{"sign" : sign, "xi" : xi.to_json()["coeffs"]} for sign, xi in self.terms],
            "omega" : self.omega,
            "kind" : self.kind,
            "params" : self.params.to_json() if self.params is not None else None
        }


def prepotential_W0(g, omega=1.0):
    """Radial-oscillator prepotential W_0 = -omega*x^2/2 + g*log(x).

    Raises
    ------
    ParameterRangeError
        Unless g > 0 and omega > 0.
    """
    params = ModelParams(Family.L1, 0, g, omega, check_dc_range=False)
    params.validate_oscillator_range()
    return Prepotential(-1, params.g, (), params.omega, kind="radial", params=params)


def prepotential_Wl_deformed(params):
    """Deformed-oscillator prepotential -omega*x^2/2 + (g+l)log(x) + log(xi_l(eta;g+1)/xi_l(eta;g)).

    Requires g > 0 and both deforming polynomials zero-free on (0, inf). l = 0 gives prepotential_W0.
    """
    params.validate_oscillator_range()
    xi_g = deforming_xi(params)
    xi_g1 = deforming_xi(params.shifted(1))
    kind = "radial" if params.ell == 0 else "deformed"
    return Prepotential(-1, params.g+params.ell, ((1, xi_g1), (-1, xi_g)), params.omega, kind=kind, params=params)


def prepotential_Wl_dc(params):
    """Darboux-Crum prepotential.

    L1: +omega*x^2/2 + (g+l-1)log(x) + log(xi_l(eta;g)), for g > 1/2
    L2: -omega*x^2/2 - (g+l)log(x) + log(xi_l(eta;g)), for g > -1/2
    """
    params.validate_dc_range()
    xi_g = deforming_xi(params)
    if params.family is Family.L1:
        return Prepotential(1, params.g+params.ell-1, ((1, xi_g),), params.omega, kind="dc", params=params)
    return Prepotential(-1, -(params.g+params.ell), ((1, xi_g),), params.omega, kind="dc", params=params)


@dataclass(frozen=True)
class Hamiltonian:
    """-d^2/dx^2 + W'^2 + sign*W'' + offset*omega.

    Parameters
    ----------
    prepotential : Prepotential

    sign : int
        +1 for A^- A^+, -1 for A^+ A^-.

    offset : Fraction or float, optional
        Additive constant in units of omega. Defaults to 0.
    """
    prepotential: Prepotential
    sign: int = 1
    offset: object = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "sign", _parse_sign(self.sign))
        object.__setattr__(self, "offset", to_rational(self.offset))


    @property
    def omega(self):
        return self.prepotential.omega


    @cached_property
    def potential_rational(self):
        """v(eta) with V(x) = v(eta)/x^2 (offset excluded)."""
        W = self.prepotential
        w = W.derivative
        return w*w+W.second_derivative*self.sign


    def centrifugal_coefficient(self):
        """c in V ~ c/x^2 as x -> 0+."""
        v = self.potential_rational
        return v.num.coefficient(0)/v.den.coefficient(0)


    def potential(self, x):
        """V(x) including the offset.

        Raises
        ------
        ParameterRangeError
            If any x <= 0.
        """
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0):
            raise ParameterRangeError("x", float(np.min(x)), "x > 0 (open half-line)")
        V = self.potential_rational(self.omega*x*x)/(x*x)+float(self.offset)*self.omega
        if np.ndim(V) == 0:
            return float(V)
        return V


    def apply(self, f):
        """H f as a StructuredFn with power f.p-2."""
        kinetic = f.derivative().derivative()
        R = -kinetic.R+f.R*self.potential_rational+f.R.times_eta(1)*self.offset
        return StructuredFn(f.a, f.p-2, R, f.C)


    def residual_terms(self, f, energy_units):
        """Rational parts of -f'', V f and (offset-E) f, all relative to C*exp(a*eta/2)*x^(p-2)."""
        kinetic = f.derivative().derivative()
        return [-kinetic.R, f.R*self.potential_rational, f.R.times_eta(1)*(self.offset-energy_units)]


    def to_json(self):
        return {
            "prepotential" : self.prepotential.to_json(),
            "sign" : self.sign,
            "offset" : rational_to_str(self.offset)
        }


def hamiltonian(prepotential, sign=1, offset=0):
    return Hamiltonian(prepotential, sign, offset)


def potential_eval(H, x):
    return H.potential(x)


def susy_apply(A_sign, prepotential, f):
    """Applies A^(+/-) = +/- d/dx - W' to the StructuredFn f."""
    A_sign = _parse_sign(A_sign)
    derivative = f.derivative()
    R = derivative.R*A_sign-f.R*prepotential.derivative
    return StructuredFn(f.a, f.p-1, R, f.C)


@dataclass
class EigenState:
    """Closed-form eigenstate.

    Members
    -------
    n : int

    energy : float
        energy_units*omega.

    wavefunction : StructuredFn

    energy_units : Fraction or float
        Energy in units of omega.
    """
    n: int
    energy: float
    wavefunction: StructuredFn
    energy_units: object

    def to_json(self, ground_units=None):
        data = {
            "n" : self.n,
            "energy" : self.energy,
            "energy_units" : rational_to_str(self.energy_units),
            "wavefunction" : self.wavefunction.to_json()
        }
        if ground_units is not None:
            data["energy_ground_zero_units"] = rational_to_str(self.energy_units-ground_units)
        return data


def normalize(f, omega, n_nodes=200):
    """Scales f to unit L2 norm on (0, inf) and makes it positive as x -> 0+.

    Raises
    ------
    NonNormalizableError
        If f is not square-integrable.
    """
    if f.is_zero():
        return f
    if not f.is_square_integrable():
        raise NonNormalizableError("function with a={0}, p={1} is not square-integrable".format(f.a, f.p))
    unit = StructuredFn(f.a, f.p, f.R, 1.0)
    norm_sq = numerics.integrate_structured(unit*unit, omega, n_nodes=n_nodes)
    return StructuredFn(f.a, f.p, f.R, unit.sign_near_zero()/np.sqrt(norm_sq))


def eigensystem_deformed(params, n_max, normalized=True, **kwargs):
    """Eigenstates n = 0..n_max of the deformed oscillator H_l^(+).

    psi_{l,n} = exp(-eta/2) x^(g+l) P_{l,n}(eta;g)/xi_l(eta;g) with E_n = 4n*omega.
    l = 0 gives the radial oscillator.

    Parameters
    ----------
    params : ModelParams

    n_max : int

    normalized : bool, optional
        Normalize numerically by quadrature. Defaults to True.

    verbose : bool, optional

    n_nodes : int, optional
        Quadrature nodes for the normalization. Defaults to 200.

    Returns
    -------
    list of EigenState
    """
    verbose = kwargs.get("verbose", False)
    n_nodes = kwargs.get("n_nodes", 200)

    params.validate_oscillator_range()
    xi_g = deforming_xi(params)
    deforming_xi(params.shifted(1))
    power = params.g+params.ell

    if verbose:
        print("Building {0} eigenstates for {1} l={2} g={3}...".format(n_max+1, params.family, params.ell, rational_to_str(params.g)))
        start_time = time.time()

    states = []
    for n in range(n_max+1):
        f = StructuredFn(-1, power, RationalQ(exceptional_P(params, n), xi_g))
        if normalized:
            f = normalize(f, params.omega, n_nodes=n_nodes)
        energy_units = 4*n
        states.append(EigenState(n, float(energy_units)*params.omega, f, Fraction(energy_units)))

    if verbose: print("Done in {0:.3f} s".format(time.time()-start_time))
    return states


def dc_offset_units(params):
    """Constant c (units of omega) with V_{H^(+)} = V_{H_0^(+)}(g') + c, where g' = g+l-1 (L1) or g+l+1 (L2)."""
    if params.family is Family.L1:
        return 2*(2*params.g+4*params.ell-1)
    return 2*(2*params.g+1)


def dc_reference_coupling(params):
    # g' of the radial oscillator sharing the plus-side spectrum
    if params.family is Family.L1:
        return params.g+params.ell-1
    return params.g+params.ell+1


def eigensystem_dc_pair(params, n_max, normalized=True, **kwargs):
    """Eigenstates of the Darboux-Crum pair H^(+) = A^- A^+ and H^(-) = A^+ A^-.

    Plus side, L1: E = 4(n+g+2l-1/2) omega, psi = exp(-eta/2) x^(g+l-1) L_n^(g+l-3/2)(eta).
    Plus side, L2: E = 4(n+g+1/2) omega, psi = exp(-eta/2) x^(g+l+1) L_n^(g+l+1/2)(eta).
    The minus side is A^+ applied to the plus side, with the same energies.

    Returns
    -------
    tuple of (list of EigenState, list of EigenState)
    """
    n_nodes = kwargs.get("n_nodes", 200)
    if params.ell < 1:
        raise ParameterRangeError("ell", params.ell, "ell >= 1 (Darboux-Crum pair)")
    W = prepotential_Wl_dc(params)

    power = dc_reference_coupling(params)
    alpha = power-HALF
    offset = dc_offset_units(params)

    plus = []
    minus = []
    for n in range(n_max+1):
        energy_units = 4*n+offset
        energy = float(energy_units)*params.omega
        f_plus = StructuredFn(-1, power, RationalQ(laguerre(n, alpha)))
        f_minus = susy_apply(1, W, f_plus)
        if normalized:
            f_plus = normalize(f_plus, params.omega, n_nodes=n_nodes)
            f_minus = normalize(f_minus, params.omega, n_nodes=n_nodes)
        plus.append(EigenState(n, energy, f_plus, energy_units))
        minus.append(EigenState(n, energy, f_minus, energy_units))
    return plus, minus


@dataclass
class PartnerMatch:
    """Minus-side Darboux-Crum state n set against the deformed-oscillator state n.

    Members
    -------
    n : int

    proportional : bool
        Exact result of A^+ psi^(+)_n = c psi_{l,n}.

    constant : float or None
        c for the unnormalized states.

    deviation : float
        max|psi^(-)_n - psi_{l,n}|/max|psi_{l,n}| on the test grid, both normalized.
    """
    n: int
    proportional: bool
    constant: object
    deviation: float

    def to_json(self):
        return {
            "n" : self.n,
            "proportional" : bool(self.proportional),
            "constant" : self.constant,
            "deviation" : float(self.deviation)
        }


def dc_partner_states(params, n_max, grid=None, n_nodes=200):
    """Matches the minus side of the Darboux-Crum pair with the deformed oscillator.

    H^(-) is H_l^(+)(g) shifted by dc_offset_units, so A^+ psi^(+)_n is a multiple of psi_{l,n}. The
    multiple has no closed form and is measured here.

    Parameters
    ----------
    params : ModelParams

    n_max : int

    grid : ndarray, optional
        Test grid for the pointwise comparison. Defaults to a log-linear grid covering the states.

    n_nodes : int, optional
        Quadrature nodes for the normalization. Defaults to 200.

    Returns
    -------
    list of PartnerMatch

    Raises
    ------
    ParameterRangeError
        If l = 0 or g is outside the radial-oscillator range g > 0.
    """
    _, minus = eigensystem_dc_pair(params, n_max, normalized=False)
    deformed = eigensystem_deformed(params, n_max, normalized=False)

    if grid is None:
        power = max(float(state.wavefunction.effective_power_at_infinity()) for state in deformed)
        x_max = numerics.domain_end(params.omega, power=max(power/2.0, 0.0), rate=0.5)
        grid = numerics.log_linear_grid(x_max, 400, x_min=1e-3/np.sqrt(params.omega))

    matches = []
    for partner, state in zip(minus, deformed):
        f_minus = partner.wavefunction
        f_def = state.wavefunction
        constant = f_minus.proportionality_constant(f_def, params.omega)
        values_minus = normalize(f_minus, params.omega, n_nodes=n_nodes).evaluate(grid, params.omega)
        values_def = normalize(f_def, params.omega, n_nodes=n_nodes).evaluate(grid, params.omega)
        deviation = np.max(np.abs(values_minus-values_def))/np.max(np.abs(values_def))
        matches.append(PartnerMatch(state.n, constant is not None, constant, float(deviation)))
    return matches


def eigensystem_for(prepotential, n_max, **kwargs):
    """Closed-form eigenstates of A^- A^+ for a prepotential built by one of the constructors."""
    if prepotential.kind in ("radial", "deformed"):
        return eigensystem_deformed(prepotential.params, n_max, **kwargs)
    if prepotential.kind == "dc":
        return eigensystem_dc_pair(prepotential.params, n_max, **kwargs)[0]
    raise ValueError("No closed-form eigensystem is known for a prepotential of kind '{0}'.".format(prepotential.kind))


def residual_check(H, state, path="auto", grid=None):
    """Relative residual of (H - E) psi.

    The residual and each of its terms -psi'', V psi and (offset-E) psi share the factor
    C*exp(a*eta/2)*x^(p-2). On the exact path the remaining rational functions are brought over a
    common denominator and the result is max|coef(sum)|/max_i max|coef(term_i)|, exactly 0 for a
    true eigenstate. On the float path the same ratio is taken over grid values.

    Parameters
    ----------
    H : Hamiltonian

    state : EigenState

    path : str, optional
        "exact", "float" or "auto" (exact whenever all inputs are rational). Defaults to "auto".

    grid : ndarray, optional
        Evaluation grid for the float path.

    Returns
    -------
    float
    """
    f = state.wavefunction
    exact = f.exact and H.prepotential.exact and isinstance(H.offset, Fraction) and isinstance(state.energy_units, Fraction)
    if path == "exact" and not exact:
        raise ValueError("The exact residual path needs rational parameters throughout.")
    if path == "auto":
        path = "exact" if exact else "float"

    terms = H.residual_terms(f, state.energy_units)

    if path == "exact":
        numerators, _ = common_denominator(terms)
        total = numerators[0]+numerators[1]+numerators[2]
        scale = max(num.max_abs_coeff() for num in numerators)
        if scale == 0:
            return 0.0
        return float(total.max_abs_coeff()/scale)

    if grid is None:
        x_max = numerics.domain_end(H.omega, power=max(float(f.effective_power_at_infinity())/2.0, 0.0), rate=0.5)
        grid = numerics.log_linear_grid(x_max, 400, x_min=1e-3)
    eta = H.omega*grid*grid
    factor = np.exp(float(f.a)*eta/2.0)*np.power(grid, float(f.p)-2.0)
    values = [term(eta)*factor for term in terms]
    scale = max(np.max(np.abs(value)) for value in values)
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(values[0]+values[1]+values[2]))/scale)


def perturb_state(state, eps):
    """Copy of the state whose wavefunction numerator gains eps*max|coef|*eta^(deg N + 1).

    Used as a negative control for residual_check.
    """
    f = state.wavefunction
    if f.exact:
        eps = Fraction(eps)
    bump = PolyQ.monomial(f.N.degree()+1, eps*f.N.max_abs_coeff())
    perturbed = StructuredFn(f.a, f.p, RationalQ(f.N+bump, f.D), f.C)
    return EigenState(state.n, state.energy, perturbed, state.energy_units)


def shape_invariance_gap(g, omega=1.0):
    """[V^(-)(x;g) - V^(+)(x;g+1)]/omega for the radial oscillator, as an exact rational function of eta.

    Shape invariance makes this the constant 4.
    """
    W_g = prepotential_W0(g, omega)
    W_g1 = prepotential_W0(W_g.b+1, omega)
    difference = Hamiltonian(W_g, -1).potential_rational-Hamiltonian(W_g1, 1).potential_rational
    return difference.times_eta(-1)


def ladder_state(g, n, omega=1.0):
    """phi_n of the radial oscillator as A^-(g) A^-(g+1) ... A^-(g+n-1) exp(W_0(g+n)), unnormalized."""
    g = to_rational(g)
    f = prepotential_W0(g+n, omega).ground_state()
    for k in range(n-1, -1, -1):
        f = susy_apply(-1, prepotential_W0(g+k, omega), f)
    return f


def dc_potential_identity(params):
    """[V_{H^(+)} - V_{H_0^(+)}(g')]/omega as an exact rational function; equals dc_offset_units(params)."""
    W_dc = prepotential_Wl_dc(params)
    W_ref = prepotential_W0(dc_reference_coupling(params), params.omega)
    difference = Hamiltonian(W_dc, 1).potential_rational-Hamiltonian(W_ref, 1).potential_rational
    return difference.times_eta(-1)


def dc_partner_identity(params):
    """[V_{H^(-)} - V_{H_l^(+)}(g)]/omega as an exact rational function; equals dc_offset_units(params)."""
    W_dc = prepotential_Wl_dc(params)
    W_def = prepotential_Wl_deformed(params)
    difference = Hamiltonian(W_dc, -1).potential_rational-Hamiltonian(W_def, 1).potential_rational
    return difference.times_eta(-1)


def eigensystem_to_json(params, states, hamiltonian=None, ground_units=None, partners=None):
    """JSON form {params, states: [{n, energy, wavefunction: {a, p, N, D, C}}]}.

    partners, a list of PartnerMatch, adds the measured partner constants.
    """
    data = {
        "params" : params.to_json(),
        "states" : [state.to_json(ground_units=ground_units) for state in states]
    }
    if hamiltonian is not None:
        data["hamiltonian"] = hamiltonian.to_json()
    if partners is not None:
        data["partner_constants"] = [match.to_json() for match in partners]
    return data
