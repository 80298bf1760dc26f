"""Custom exceptions used in XLaguerre."""


class ParameterRangeError(Exception):
    """An exception thrown when a model parameter lies outside the range for which the construction is defined.

    Members
    ----------
    parameter : str
        Name of the offending parameter (e.g. "g", "omega", "m").

    value : object
        The value that was given.

    allowed : str
        Description of the allowed range, e.g. "g > 1/2 (L1 Darboux-Crum range)".

    message : str
        A message about the error.
    """

    def __init__(self, parameter, value, allowed):

        # Store args
        self.parameter = parameter
        self.value = value
        self.allowed = allowed
        self.message = "Parameter {0}={1} is out of range. Required: {2}.".format(self.parameter, self.value, self.allowed)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message


class SingularDeformationError(Exception):
    """An exception thrown when a deforming polynomial has zeros on the positive half-line, so that the
    potential built from it would be singular.

    Members
    ----------
    family : str
        "L1" or "L2".

    ell : int
        Degree of the deforming polynomial.

    g : Fraction or float
        Coupling at which the polynomial was built.

    n_roots : int
        Number of distinct roots found on (0, inf).

    message : str
        A message about the error.
    """

    def __init__(self, family, ell, g, n_roots):

        # Store args
        self.family = family
        self.ell = ell
        self.g = g
        self.n_roots = n_roots
        self.message = "The {0} deforming polynomial of degree {1} at g={2} has {3} zero(s) on (0, inf). The potential would be singular; choose g inside the regular range.".format(family, ell, g, n_roots)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message


class UnimplementedBranchError(Exception):
    """An exception thrown when a Dirac construction is requested on the mirrored (non-normalizable for f_+)
    branch, which is deliberately not implemented.

    Members
    ----------
    branch : str
        Description of the requested branch, e.g. "m < 0".

    message : str
        A message about the error.
    """

    def __init__(self, branch):

        # Store args
        self.branch = branch
        self.message = "Requested the unimplemented mirrored branch ({0}). Only m >= 0 (minimal and cylindrical coupling) and k < 0 (central electric coupling) are supported.".format(branch)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message


class NonNormalizableError(Exception):
    """An exception thrown when a density or state that must be normalizable on (0, inf) is not.

    Members
    ----------
    reason : str
        Why normalizability fails.

    message : str
        A message about the error.
    """

    def __init__(self, reason):

        # Store args
        self.reason = reason
        self.message = "Not normalizable on (0, inf): {0}".format(reason)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message


class QuadratureNotConvergedError(Exception):
    """An exception thrown when doubling the number of quadrature nodes changes an integral by more than
    the declared accuracy.

    Members
    ----------
    estimate : float
        Change in the integral observed between n and 2n nodes.

    tolerance : float
        Declared accuracy of the quadrature.

    message : str
        A message about the error.
    """

    def __init__(self, estimate, tolerance):

        # Store args
        self.estimate = estimate
        self.tolerance = tolerance
        self.message = "Gauss quadrature failed to converge. Increase the number of nodes or the domain end."

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message+" Node doubling changed the integral by {0} (tolerance {1}).".format(self.estimate, self.tolerance)


class SturmCountError(Exception):
    """An exception thrown when the Sturm count of the discretized Hamiltonian disagrees with the index of
    an eigenvalue returned by the bisection eigensolver.

    Members
    ----------
    expected : int
        Number of eigenvalues that should lie below the trial value.

    found : int
        Number counted by the Sturm sequence.

    message : str
        A message about the error.
    """

    def __init__(self, expected, found):

        # Store args
        self.expected = expected
        self.found = found
        self.message = "Sturm count mismatch in the finite-difference eigensolver: expected {0} eigenvalues below the trial value, counted {1}.".format(expected, found)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message


class TruncationNotConvergedError(Exception):
    """An exception thrown when the spectral coefficients of a Fokker-Planck expansion do not decay below the
    acceptance threshold within the allowed number of modes.

    Members
    ----------
    n_max : int
        Largest mode index that was tried.

    tail_ratio : float
        |c_n_max|/max|c_n| at termination.

    message : str
        A message about the error.
    """

    def __init__(self, n_max, tail_ratio):

        # Store args
        self.n_max = n_max
        self.tail_ratio = tail_ratio
        self.message = "The spectral expansion did not meet the coefficient-tail criterion within {0} modes.".format(n_max)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message+" The final tail ratio was {0}.".format(self.tail_ratio)


class NonFiniteSolutionError(Exception):
    """An exception thrown when the Crank-Nicolson oracle produces non-finite values.

    Members
    ----------
    step : int
        Time step at which the problem was detected.

    time : float
        Simulation time at that step.

    message : str
        A message about the error.
    """

    def __init__(self, step, time):

        # Store args
        self.step = step
        self.time = time
        self.message = "The Crank-Nicolson solution became non-finite at step {0} (t={1}). Check the grid and the drift near the boundaries.".format(step, time)

        # Initialize super
        super().__init__(self.message)


    def __str__(self):
        return self.message
