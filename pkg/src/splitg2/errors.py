"""Exception types shared across the package."""


class AlphabetMismatch(ValueError):
    """Two scalars from different parameter alphabets were combined."""


class PoleAtPoint(ZeroDivisionError):
    """A rational function was specialized at a zero of its denominator."""


class ParseError(ValueError):
    """Malformed scalar expression or structured-text document."""


class DimensionMismatch(ValueError):
    """Operands live over coframes of different dimensions."""


class DegreeMismatch(ValueError):
    """Linear combination of forms of different degrees."""


class SingularMatrix(ValueError):
    """Exact inversion of a singular matrix was requested."""


class Degenerate(ValueError):
    """A metric tensor with zero determinant was supplied."""


class NotAFibration(ValueError):
    """The horizontal coframe fails the integrability test."""


class NotInvariant(ValueError):
    """A subspace fails the required bracket-invariance condition."""


class WrongDimension(ValueError):
    """A solution space has a dimension other than the structural one."""


class NonUniqueSolution(ValueError):
    """A linear solve required to be unique has free unknowns."""


class InconsistentSystem(ValueError):
    """A linear solve met a contradictory equation."""


class ZeroReference(ValueError):
    """Volume calibration against a zero reference value."""


class ValidationError(ValueError):
    """Input data fails a structural validity check."""


class ExclusionError(ValueError):
    """A parameter specialization hits an excluded value."""


class InternalInconsistency(RuntimeError):
    """A cross-check that can only fail on an internal bug fired."""
