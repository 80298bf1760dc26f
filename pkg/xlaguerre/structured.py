"""Closed-form functions on the half-line built from polynomials in eta = omega*x^2.

Every function handled here has the form

    f(x) = C * exp(a*omega*x^2/2) * x^p * N(eta)/D(eta).

Differentiation maps this form onto itself with p -> p-1 and no explicit
omega: d/dx acting on exp(a*omega*x^2/2) gives x^-1 * a*eta, and acting on
R(eta) gives x^-1 * 2*eta*R'(eta). Energies are carried in units of omega,
because omega*x^p = x^(p-2)*eta. All identities therefore reduce to
identities between rational functions of eta with rational coefficients.
"""

from fractions import Fraction

import numpy as np

from xlaguerre.polycore import PolyQ, rational_to_str


class RationalQ:
    """Rational function N(eta)/D(eta). Exact instances are kept in lowest terms with a monic
    denominator; float instances are not reduced.

    Parameters
    ----------
    num : PolyQ or scalar

    den : PolyQ or scalar, optional
        Defaults to 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, PolyQ) else PolyQ([num])
        if den is None:
            den = PolyQ([Fraction(1)])
        elif not isinstance(den, PolyQ):
            den = PolyQ([den])
        if den.is_zero():
            raise ZeroDivisionError("Rational function with a zero denominator.")

        if num.is_zero():
            den = PolyQ([Fraction(1)])
        elif num.exact and den.exact:
            common = num.gcd(den)
            if common.degree() > 0:
                num = num.exact_div(common)
                den = den.exact_div(common)
            lead = den.leading()
            if lead != 1:
                num = num.scale(1/lead)
                den = den.scale(1/lead)
        self.num = num
        self.den = den


    @property
    def exact(self):
        return self.num.exact and self.den.exact


    def is_zero(self):
        return self.num.is_zero()


    def is_constant(self):
        return self.num.degree() <= 0 and self.den.degree() == 0


    def constant_value(self):
        """Value of a constant rational function."""
        if not self.is_constant():
            raise ValueError("{0} is not constant.".format(self))
        return self.num.coefficient(0)/self.den.coefficient(0)


    def __repr__(self):
        return "RationalQ({0}, {1})".format(self.num, self.den)


    def __eq__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num*other.den-other.num*self.den).is_zero()


    def __hash__(self):
        return hash((self.num, self.den))


    def __add__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalQ(self.num+other.num, self.den)
        return RationalQ(self.num*other.den+other.num*self.den, self.den*other.den)

    __radd__ = __add__


    def __neg__(self):
        return RationalQ(-self.num, self.den)


    def __sub__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self+(-other)


    def __rsub__(self, other):
        return (-self)+other


    def __mul__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalQ(self.num*other.num, self.den*other.den)

    __rmul__ = __mul__


    def __truediv__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalQ(self.num*other.den, self.den*other.num)


    def times_eta(self, k=1):
        """Multiplies by eta^k (k may be negative)."""
        if k >= 0:
            return RationalQ(self.num.shift_degree(k), self.den)
        return RationalQ(self.num, self.den.shift_degree(-k))


    def diff(self):
        """Derivative with respect to eta."""
        if self.den.degree() == 0:
            return RationalQ(self.num.diff(), self.den)
        return RationalQ(self.num.diff()*self.den-self.num*self.den.diff(), self.den*self.den)


    def __call__(self, eta):
        return evaluate_polynomial(self.num, eta)/evaluate_polynomial(self.den, eta)


    def is_proportional_to(self, other):
        """Whether self = c*other for some nonzero constant c."""
        other = _promote(other)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        left = self.num*other.den
        right = other.num*self.den
        if left.degree() != right.degree():
            return False
        return (left.scale(right.leading())-right.scale(left.leading())).is_zero()


    def to_json(self):
        return {"N" : self.num.to_json()["coeffs"], "D" : self.den.to_json()["coeffs"]}


def _promote(other):
    if isinstance(other, RationalQ):
        return other
    if isinstance(other, PolyQ):
        return RationalQ(other)
    if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
        return RationalQ(PolyQ([other]))
    return NotImplemented


def common_denominator(terms):
    """Brings a list of exact rational functions over their least common denominator.

    Returns
    -------
    list of PolyQ
        Numerators over the common denominator.

    PolyQ
        The common denominator.
    """
    common = PolyQ([Fraction(1)])
    for term in terms:
        common = (common*term.den).exact_div(common.gcd(term.den))
    numerators = [term.num*common.exact_div(term.den) for term in terms]
    return numerators, common


_laguerre_basis_cache = {}


def _laguerre_basis_coeffs(p):
    # Exact coefficients of p in the basis L_k^(0); x^j = j! sum_k (-1)^k binom(j,k) L_k
    cached = _laguerre_basis_cache.get(p)
    if cached is not None:
        return cached
    degree = p.degree()
    result = [Fraction(0)]*(degree+1)
    factorial = 1
    for j, c in enumerate(p.coeffs):
        if j > 0:
            factorial *= j
        if c == 0:
            continue
        binom = 1
        for k in range(j+1):
            result[k] += c*factorial*binom*(-1)**k
            binom = binom*(j-k)//(k+1)
    coeffs = np.array([float(r) for r in result])
    _laguerre_basis_cache[p] = coeffs
    return coeffs


def evaluate_polynomial(p, eta):
    """Float evaluation of an eta polynomial.

    Low degrees use Horner's rule. High-degree exact polynomials are evaluated through their exact
    expansion in classical Laguerre polynomials and Clenshaw summation, which avoids the
    cancellation of the alternating monomial series for large eta.
    """
    if p.degree() <= 10 or not p.exact:
        return p(eta)
    eta = np.asarray(eta, dtype=float)
    result = np.polynomial.laguerre.lagval(eta, _laguerre_basis_coeffs(p))
    if np.ndim(result) == 0:
        return float(result)
    return result


class StructuredFn:
    """Closed-form function C * exp(a*omega*x^2/2) * x^p * N(eta)/D(eta) on (0, inf).

    Parameters
    ----------
    a : Fraction or int
        Gaussian exponent coefficient. -1 for bound states, -2 for densities, 0 for no gaussian.

    p : Fraction, int or float
        Power of x.

    R : RationalQ
        The rational part N(eta)/D(eta).

    C : float, optional
        Normalization constant. Defaults to 1.
    """

    __slots__ = ("a", "p", "R", "C")

    def __init__(self, a, p, R, C=1.0):
        self.a = Fraction(a) if isinstance(a, int) else a
        self.p = Fraction(p) if isinstance(p, int) else p
        self.R = R if isinstance(R, RationalQ) else RationalQ(R)
        self.C = C


    @property
    def N(self):
        return self.R.num


    @property
    def D(self):
        return self.R.den


    @property
    def exact(self):
        return self.R.exact and isinstance(self.p, Fraction)


    def __repr__(self):
        return "StructuredFn(a={0}, p={1}, N={2}, D={3}, C={4})".format(self.a, self.p, self.N, self.D, self.C)


    def is_zero(self):
        return self.R.is_zero() or self.C == 0


    def scaled(self, c):
        return StructuredFn(self.a, self.p, self.R, self.C*c)


    def with_rational(self, R, p=None):
        return StructuredFn(self.a, self.p if p is None else p, R, self.C)


    def derivative(self):
        """Exact derivative d/dx, returned in the same form with power p-1."""
        eta = RationalQ(PolyQ.eta())
        R = self.R*(eta*self.a+self.p)+self.R.diff().times_eta(1)*2
        return StructuredFn(self.a, self.p-1, R, self.C)


    def times(self, R, dp=0):
        """Multiplies by x^dp * R(eta)."""
        return StructuredFn(self.a, self.p+dp, self.R*R, self.C)


    def __mul__(self, other):
        if isinstance(other, StructuredFn):
            return StructuredFn(self.a+other.a, self.p+other.p, self.R*other.R, self.C*other.C)
        if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__


    def __add__(self, other):
        if not isinstance(other, StructuredFn):
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.a != other.a or self.p != other.p:
            raise ValueError("Can only add StructuredFns with the same gaussian and power factors.")
        if self.C == other.C:
            return StructuredFn(self.a, self.p, self.R+other.R, self.C)
        return StructuredFn(self.a, self.p, self.R+other.R*(other.C/self.C), self.C)


    def __neg__(self):
        return self.scaled(-1)


    def __sub__(self, other):
        return self+(-other)


    def __call__(self, x, omega):
        return self.evaluate(x, omega)


    def evaluate(self, x, omega):
        """Evaluates the function at x > 0 for the given omega."""
        x = np.asarray(x, dtype=float)
        eta = omega*x*x
        if self.is_zero():
            return np.zeros_like(x) if x.ndim else 0.0
        values = self.C*np.exp(float(self.a)*eta/2.0)*np.power(x, float(self.p))*self.R(eta)
        if np.ndim(values) == 0:
            return float(values)
        return values


    def sign_near_zero(self):
        """Sign of the function as x -> 0+, read off the lowest-order coefficients."""
        if self.is_zero():
            return 0
        n_low = self.N.coefficient(self.N.lowest_order())
        d_low = self.D.coefficient(self.D.lowest_order())
        return 1 if (n_low/d_low)*self.C > 0 else -1


    def effective_power_at_zero(self):
        """Exponent s with f ~ x^s as x -> 0+."""
        return self.p+2*(self.N.lowest_order()-self.D.lowest_order())


    def effective_power_at_infinity(self):
        """Exponent s with f ~ x^s * gaussian as x -> inf."""
        return self.p+2*(self.N.degree()-self.D.degree())


    def is_square_integrable(self):
        """Decides square-integrability on (0, inf) from (a, p, N, D)."""
        if self.is_zero():
            return True
        if not self.effective_power_at_zero() > -0.5:
            return False
        if self.a < 0:
            return True
        if self.a > 0:
            return False
        return self.effective_power_at_infinity() < -0.5


    def is_proportional_to(self, other):
        """Exact test of f = c*other for a constant c (omega-independent).

        Powers may differ by an even integer 2k, since x^(2k) = (eta/omega)^k.
        """
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.a != other.a:
            return False
        half_gap = (other.p-self.p)/2
        if half_gap != int(half_gap):
            return False
        return self.R.is_proportional_to(other.R.times_eta(int(half_gap)))


    def proportionality_constant(self, other, omega):
        """c with f = c*other at the given omega, or None if the two are not proportional."""
        if self.is_zero() or not self.is_proportional_to(other):
            return None
        k = int((other.p-self.p)/2)
        left = self.R
        right = other.R.times_eta(k)
        ratio = (left.num*right.den).leading()/(right.num*left.den).leading()
        return float(ratio)*self.C/other.C*omega**k


    def to_json(self):
        return {
            "a" : rational_to_str(self.a),
            "p" : rational_to_str(self.p),
            "N" : self.N.to_json()["coeffs"],
            "D" : self.D.to_json()["coeffs"],
            "C" : float(self.C)
        }
