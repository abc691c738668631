"""Smooth Poisson-Cauchy singular integral operators and Jackson-type bounds."""

from .bounds import BoundReport, bound
from .coefficients import CoefficientSet, alphas, binomial_identity_check
from .errors import CapabilityError, ConvergenceFailure, DivergenceError, DomainError
from .kernel import KernelParams, halfline_moment, kernel_value, moment, normalization_W
from .operators import OperatorParams, apply_M, apply_M_symmetric, error_Delta, error_K
from .quad import Integrand, QuadratureSpec
from .smoothness import TestFunction, modulus_of_smoothness

__version__ = "0.1.0"
