"""Exception hierarchy shared by the arithmetic library and the experiment CLI."""


class DrinfeldError(Exception):
    """Root of every error raised by this package."""


# Finite fields

class FieldError(DrinfeldError):
    """Errors raised while building or using finite fields."""


class NotPrimePower(FieldError):
    """Field size is not a prime power."""


class ReducibleModulus(FieldError):
    """Supplied modulus is not irreducible (or not monic of the right degree)."""


class ZeroInverse(FieldError, ZeroDivisionError):
    """Inverse of the zero element requested."""


class ContextMismatch(FieldError):
    """Operands live in different coefficient contexts."""


class NotADivisor(FieldError):
    """Subfield degree does not divide the field degree."""


class IncompatibleDegrees(FieldError):
    """No embedding exists between the two fields."""


class FieldDegreeCapExceeded(FieldError):
    """A search needed an extension larger than the configured cap."""


# Rings and series

class RingError(DrinfeldError):
    """Errors raised by polynomial and series arithmetic."""


class DivisionByZero(RingError, ZeroDivisionError):
    """Division by the zero polynomial."""


class InverseOfZero(RingError, ZeroDivisionError):
    """Inverse of a series that is zero to its precision."""


class PrecisionExhausted(RingError):
    """Not enough known coefficients to produce the requested result."""


class ZeroValuation(RingError):
    """Valuation of an element that is zero to precision."""


# Drinfeld modules

class ModuleError(DrinfeldError):
    """Invalid Drinfeld module data."""


class ZeroLeadingCoefficient(ModuleError):
    """Leading coefficient of phi_t vanishes."""


class ConstantImage(ModuleError):
    """phi_t has tau-degree zero."""


class BadReduction(ModuleError):
    """Reduction at the prime drops the rank."""


# Solvers

class SolverError(DrinfeldError):
    """Linear or torsion solvers could not produce a unique answer."""


class NoSolution(SolverError):
    """Linear system is infeasible within the degree bounds."""


class NonUniqueSolution(SolverError):
    """Linear system has a nontrivial kernel within the degree bounds."""


class TorsionNotSplit(SolverError):
    """Torsion module is not rational over any extension under the cap."""


# Measures

class QuotientTooLarge(DrinfeldError):
    """Finite quotient exceeds the enumeration cap."""


# Carlitz tower

class TowerCertificationError(DrinfeldError):
    """No no-root certificate was found for a tower level."""


RootFound = TowerCertificationError


# Harness

class InvariantViolation(DrinfeldError):
    """A produced record breaks a mathematical invariant."""


class ConfigurationError(DrinfeldError):
    """Configuration file or command options are invalid."""


class ReportIOError(DrinfeldError, OSError):
    """Report could not be written or parsed."""
