"""Exact-arithmetic polynomials in the sinusoidal coordinate eta = omega*x^2.

Provides the classical Laguerre polynomials L_n^(alpha), the L1/L2 deforming
polynomials xi_l(eta;g) and the exceptional X_l Laguerre polynomials
P_{l,n}(eta;g). Coefficients are Fractions whenever g is rational, so every
polynomial identity in eta is decided exactly. A float g builds the same
objects with float coefficients (lower-trust path, PolyQ.exact is False).

Routine Listings
-----------------

PolyQ : immutable dense univariate polynomial

Family : L1 or L2 deforming-function family

ModelParams : (family, ell, g, omega) identifying one deformed system

laguerre : classical Laguerre polynomial from the three-term recurrence

deforming_xi : xi_l(eta;g) with zero-freedom on (0, inf) verified

exceptional_P : X_l Laguerre polynomial P_{l,n}(eta;g)

poly_eval, poly_diff, poly_add, poly_mul, poly_scale : ring operations
"""

import enum
import functools
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from xlaguerre.exceptions import ParameterRangeError, SingularDeformationError


Rational = Fraction
HALF = Fraction(1, 2)


def is_exact_number(value):
    # Ints and Fractions (but not bools or floats) count as exact
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_rational(value):
    """Converts an int, Fraction or "p/q" string to a Fraction. Floats are returned unchanged
    (they select the lower-trust float path).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Cannot interpret a boolean as a rational number.")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError("Cannot interpret {0} (type {1}) as a rational number.".format(value, type(value)))


def parse_rational(text):
    """Parses "p/q" or "p" into a Fraction in lowest terms.

    Raises
    ------
    ValueError
        If the string is malformed or the denominator is zero.
    """
    text = text.strip()
    parts = text.split("/")
    if len(parts) > 2 or not all(part.strip().lstrip("+-").isdigit() for part in parts):
        raise ValueError("'{0}' is not a rational number of the form p/q.".format(text))
    numerator = int(parts[0])
    denominator = int(parts[1]) if len(parts) == 2 else 1
    if denominator == 0:
        raise ValueError("'{0}' has a zero denominator.".format(text))
    return Fraction(numerator, denominator)


def rational_to_str(value):
    # Lowest-terms "num/den" string; floats keep their repr
    if isinstance(value, Fraction):
        return "{0}/{1}".format(value.numerator, value.denominator)
    if isinstance(value, int):
        return "{0}/1".format(value)
    return repr(float(value))


class PolyQ:
    """Dense univariate polynomial in eta. Index k of coeffs holds the coefficient of eta^k.
    Trailing zeros are trimmed, so the zero polynomial has no coefficients. Instances are
    immutable and hashable.

    Parameters
    ----------
    coeffs : iterable
        Coefficients in increasing order of degree. Ints are promoted to Fractions.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=()):
        cleaned = [Fraction(c) if (isinstance(c, int) and not isinstance(c, bool)) else c for c in coeffs]
        while cleaned and cleaned[-1] == 0:
            cleaned.pop()
        object.__setattr__(self, "_coeffs", tuple(cleaned))


    def __setattr__(self, name, value):
        raise AttributeError("PolyQ is immutable.")


    @classmethod
    def constant(cls, c):
        return cls([c])


    @classmethod
    def eta(cls):
        return cls([0, 1])


    @classmethod
    def monomial(cls, k, c=1):
        return cls([0]*k+[c])


    @property
    def coeffs(self):
        return self._coeffs


    @property
    def exact(self):
        """True when every coefficient is a Fraction."""
        return all(isinstance(c, Fraction) for c in self._coeffs)


    def degree(self):
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self._coeffs)-1


    def is_zero(self):
        return len(self._coeffs) == 0


    def leading(self):
        return self._coeffs[-1] if self._coeffs else Fraction(0)


    def coefficient(self, k):
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else Fraction(0)


    def lowest_order(self):
        """Index of the lowest nonzero coefficient (the order of the zero at eta = 0)."""
        for k, c in enumerate(self._coeffs):
            if c != 0:
                return k
        return 0


    def max_abs_coeff(self):
        return max((abs(c) for c in self._coeffs), default=Fraction(0))


    def __repr__(self):
        return "PolyQ([{0}])".format(", ".join(rational_to_str(c) for c in self._coeffs))


    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, float, Fraction)):
            return self._coeffs == PolyQ([other])._coeffs
        return NotImplemented


    def __hash__(self):
        return hash(self._coeffs)


    def __add__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self._coeffs), len(other._coeffs))
        return PolyQ([self.coefficient(k)+other.coefficient(k) for k in range(n)])

    __radd__ = __add__


    def __neg__(self):
        return PolyQ([-c for c in self._coeffs])


    def __sub__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self+(-other)


    def __rsub__(self, other):
        return (-self)+other


    def __mul__(self, other):
        if isinstance(other, PolyQ):
            if self.is_zero() or other.is_zero():
                return PolyQ()
            result = [Fraction(0)]*(len(self._coeffs)+len(other._coeffs)-1)
            for i, a in enumerate(self._coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other._coeffs):
                    result[i+j] += a*b
            return PolyQ(result)
        if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__


    def scale(self, c):
        """Multiplies every coefficient by the scalar c."""
        return PolyQ([c*a for a in self._coeffs])


    def diff(self):
        """Exact derivative with respect to eta."""
        return PolyQ([k*c for k, c in enumerate(self._coeffs)][1:])


    def negate_argument(self):
        """Returns p(-eta) by flipping the signs of the odd coefficients."""
        return PolyQ([c if k % 2 == 0 else -c for k, c in enumerate(self._coeffs)])


    def shift_degree(self, k):
        """Multiplies by eta^k."""
        if self.is_zero():
            return PolyQ()
        return PolyQ([Fraction(0)]*k+list(self._coeffs))


    def __call__(self, eta):
        return poly_eval(self, eta)


    def evaluate_exact(self, eta):
        """Horner evaluation in exact arithmetic."""
        result = Fraction(0)
        for c in reversed(self._coeffs):
            result = result*eta+c
        return result


    def float_coeffs(self):
        return np.array([float(c) for c in self._coeffs], dtype=float)


    def divmod(self, divisor):
        """Polynomial long division. Returns (quotient, remainder)."""
        if divisor.is_zero():
            raise ZeroDivisionError("Polynomial division by the zero polynomial.")
        remainder = list(self._coeffs)
        d = divisor.degree()
        lead = divisor.leading()
        if len(remainder)-1 < d:
            return PolyQ(), self
        quotient = [Fraction(0)]*(len(remainder)-d)
        for k in range(len(remainder)-1-d, -1, -1):
            factor = remainder[k+d]/lead
            quotient[k] = factor
            if factor != 0:
                for j, b in enumerate(divisor._coeffs):
                    remainder[k+j] -= factor*b
            remainder[k+d] = 0*factor
        return PolyQ(quotient), PolyQ(remainder[:d])


    def __mod__(self, divisor):
        return self.divmod(divisor)[1]


    def __floordiv__(self, divisor):
        return self.divmod(divisor)[0]


    def exact_div(self, divisor):
        """Division that must leave no remainder."""
        quotient, remainder = self.divmod(divisor)
        if not remainder.is_zero():
            raise ArithmeticError("{0} does not divide {1}.".format(divisor, self))
        return quotient


    def monic(self):
        if self.is_zero():
            return self
        return self.scale(1/self.leading())


    def gcd(self, other):
        """Monic greatest common divisor over the rationals (exact polynomials only)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return PolyQ([Fraction(1)])
        return a.monic()


    def sign_changes(self):
        """Number of sign changes in the coefficient sequence (Descartes' bound on positive roots)."""
        signs = [np.sign(float(c)) for c in self._coeffs if c != 0]
        return sum(1 for s0, s1 in zip(signs[:-1], signs[1:]) if s0 != s1)


    def sturm_sequence(self):
        """Sturm sequence p, p', -rem(p, p'), ... (exact polynomials only)."""
        sequence = [self, self.diff()]
        while not sequence[-1].is_zero():
            remainder = -(sequence[-2] % sequence[-1])
            if remainder.is_zero():
                break
            sequence.append(remainder)
        return [p for p in sequence if not p.is_zero()]


    def count_positive_roots(self):
        """Counts the distinct real roots on the open half-line (0, inf).

        The exact path uses Descartes' rule as a quick accept and Sturm's theorem otherwise.
        Float polynomials fall back to numpy.roots.
        """
        if self.degree() <= 0:
            return 0

        # Float path
        if not self.exact:
            roots = np.roots(self.float_coeffs()[::-1])
            scale = max(1.0, np.max(np.abs(roots)))
            real = roots[np.abs(roots.imag) <= 1e-10*scale].real
            return int(np.sum(real > 1e-14*scale))

        # Remove the zero at eta = 0, which is outside the open interval
        p = PolyQ(self._coeffs[self.lowest_order():])
        if p.degree() <= 0 or p.sign_changes() == 0:
            return 0

        sequence = p.sturm_sequence()
        at_zero = [q.coefficient(0) for q in sequence]
        at_inf = [q.leading() for q in sequence]
        return _sign_variations(at_zero)-_sign_variations(at_inf)


    def to_json(self):
        """JSON-ready dictionary {"coeffs": ["num/den", ...]}."""
        return {"coeffs" : [rational_to_str(c) for c in self._coeffs]}


    @classmethod
    def from_json(cls, data):
        coeffs = []
        for item in data["coeffs"]:
            try:
                coeffs.append(parse_rational(item))
            except ValueError:
                coeffs.append(float(item))
        return cls(coeffs)


def _promote(other):
    if isinstance(other, PolyQ):
        return other
    if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
        return PolyQ([other])
    return NotImplemented


def _sign_variations(values):
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for s0, s1 in zip(signs[:-1], signs[1:]) if s0 != s1)


def poly_eval(p, eta):
    """Horner evaluation of p at a float or numpy array of eta values."""
    eta = np.asarray(eta, dtype=float)
    result = np.zeros_like(eta)
    for c in reversed(p.coeffs):
        result = result*eta+float(c)
    if result.ndim == 0:
        return float(result)
    return result


def poly_diff(p):
    return p.diff()


def poly_add(p, q):
    return p+q


def poly_mul(p, q):
    return p*q


def poly_scale(p, c):
    return p.scale(c)


class Family(enum.Enum):
    """The two sets of deforming functions."""
    L1 = "L1"
    L2 = "L2"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ParameterRangeError("family", value, "one of 'L1' or 'L2'")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModelParams:
    """Identifies one deformed system.

    Parameters
    ----------
    family : Family or str
        "L1" or "L2".

    ell : int
        Degree of the deformation. 0 is the undeformed radial oscillator.

    g : Fraction, int, str or float
        Coupling. Rationals (or "p/q" strings) select the exact path, floats the lower-trust path.

    omega : float
        Oscillator frequency, must be positive.

    check_dc_range : bool, optional
        Whether to enforce the Darboux-Crum ranges (L1: g > 1/2, L2: g > -1/2). Defaults to True.
        The deformed-oscillator constructions pass False and require g > 0 instead.
    """
    family: Family
    ell: int
    g: object
    omega: float = 1.0
    check_dc_range: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "g", to_rational(self.g))
        if isinstance(self.ell, bool) or not isinstance(self.ell, (int, np.integer)) or self.ell < 0:
            raise ParameterRangeError("ell", self.ell, "a non-negative integer")
        object.__setattr__(self, "ell", int(self.ell))
        if not float(self.omega) > 0.0:
            raise ParameterRangeError("omega", self.omega, "omega > 0")
        object.__setattr__(self, "omega", float(self.omega))
        if self.check_dc_range:
            self.validate_dc_range()


    @property
    def exact(self):
        return isinstance(self.g, Fraction)


    def validate_dc_range(self):
        """Checks the parameter ranges stated for the Darboux-Crum prepotentials."""
        if self.family is Family.L1 and not self.g > HALF:
            raise ParameterRangeError("g", rational_to_str(self.g), "g > 1/2 (L1 Darboux-Crum range)")
        if self.family is Family.L2 and not self.g > -HALF:
            raise ParameterRangeError("g", rational_to_str(self.g), "g > -1/2 (L2 Darboux-Crum range)")


    def validate_oscillator_range(self):
        """Checks the radial-oscillator range g > 0."""
        if not self.g > 0:
            raise ParameterRangeError("g", rational_to_str(self.g), "g > 0 (radial oscillator range)")


    def with_g(self, g, check_dc_range=False):
        """Copy of these parameters at a different coupling."""
        return replace(self, g=g, check_dc_range=check_dc_range)


    def shifted(self, dg):
        """Copy with g -> g+dg."""
        return self.with_g(self.g+dg)


    def to_json(self):
        return {
            "family" : self.family.value,
            "ell" : self.ell,
            "g" : rational_to_str(self.g),
            "omega" : float(self.omega)
        }


@functools.lru_cache(maxsize=None)
def laguerre(n, alpha):
    """Classical Laguerre polynomial L_n^(alpha)(eta).

    Built from the three-term recurrence
    (k+1) L_{k+1} = (2k+1+alpha-eta) L_k - (k+alpha) L_{k-1},
    which is defined for every alpha (including negative integers).

    Parameters
    ----------
    n : int
        Degree, n >= 0.

    alpha : Fraction, int or float
        Laguerre parameter.

    Returns
    -------
    PolyQ
        Polynomial of degree exactly n.
    """
    if n < 0:
        raise ParameterRangeError("n", n, "n >= 0")
    alpha = to_rational(alpha)
    one = Fraction(1) if is_exact_number(alpha) else 1.0

    L_prev = PolyQ([one])
    if n == 0:
        return L_prev
    L_curr = PolyQ([one+alpha, -one])
    eta = PolyQ([0*one, one])
    for k in range(1, n):
        L_next = ((eta.scale(-one)+(2*k+1+alpha))*L_curr-L_prev.scale(k+alpha)).scale(one/(k+1))
        L_prev, L_curr = L_curr, L_next
    return L_curr


@functools.lru_cache(maxsize=None)
def xi_polynomial(family, ell, g):
    """Deforming polynomial xi_l(eta;g) without any zero check.

    L1: L_l^(g+l-3/2)(-eta); L2: L_l^(-g-l-1/2)(eta).
    """
    family = Family.parse(family)
    g = to_rational(g)
    if family is Family.L1:
        return laguerre(ell, g+ell-3*HALF).negate_argument()
    return laguerre(ell, -g-ell-HALF)


def deforming_xi(params, check=True):
    """Deforming polynomial xi_l(eta;g) for the given parameters.

    Parameters
    ----------
    params : ModelParams

    check : bool, optional
        Whether to verify that xi has no zeros on (0, inf). Defaults to True.

    Returns
    -------
    PolyQ
        Degree-l polynomial; the constant 1 when l = 0.

    Raises
    ------
    SingularDeformationError
        If xi has a zero on (0, inf).
    """
    xi = xi_polynomial(params.family, params.ell, params.g)
    if check:
        n_roots = xi.count_positive_roots()
        if n_roots > 0:
            raise SingularDeformationError(params.family.value, params.ell, rational_to_str(params.g), n_roots)
    return xi


def exceptional_P(params, n):
    """Exceptional X_l Laguerre polynomial P_{l,n}(eta;g), a polynomial of degree l+n.

    L1: xi(g+1) P_n(g+l-1) - xi(g) d/deta P_n(g+l-1)
    L2: [(g+1/2) xi(g+1) P_n(g+l+1) + eta xi(g) d/deta P_n(g+l+1)] / (n+g+1/2)
    with P_n(eta;g) = L_n^(g-1/2)(eta).
    """
    if n < 0:
        raise ParameterRangeError("n", n, "n >= 0")
    g = params.g
    ell = params.ell
    xi_g = xi_polynomial(params.family, ell, g)
    xi_g1 = xi_polynomial(params.family, ell, g+1)

    if params.family is Family.L1:
        P_n = laguerre(n, g+ell-3*HALF)
        return xi_g1*P_n-xi_g*P_n.diff()

    prefactor = n+g+HALF
    if prefactor == 0:
        raise ParameterRangeError("g", rational_to_str(g), "n+g+1/2 != 0 (L2 normalization)")
    P_n = laguerre(n, g+ell+HALF)
    bracket = xi_g1*P_n.scale(g+HALF)+(xi_g*P_n.diff()).shift_degree(1)
    return bracket.scale(1/prefactor)
