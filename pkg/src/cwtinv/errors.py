"""Exception hierarchy shared by all cwtinv modules."""


class CwtInvError(Exception):
    """Base class for every error raised by cwtinv."""


class InputDomainError(CwtInvError, ValueError):
    """Input values outside the domain of an operation (non-finite samples, bad N...)."""


class StructuralError(CwtInvError, ValueError):
    """Array shapes or grid metadata are inconsistent with each other."""


class UnsupportedOperationError(CwtInvError, TypeError):
    """The kernel kind does not support the requested evaluation."""


class NumericalError(CwtInvError, RuntimeError):
    """A quadrature did not converge where it should have."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class DivergenceError(NumericalError):
    """An integral that must be finite was detected as divergent."""


class CoverageError(CwtInvError, ValueError):
    """A tabulated kernel does not cover the frequencies a scale grid samples."""


class SizeError(CwtInvError, ValueError):
    """Problem size exceeds the guard of a brute-force routine."""


class ConfigurationError(CwtInvError, ValueError):
    """Incompatible combination of reconstruction settings."""


class DegenerateKernelError(CwtInvError, ValueError):
    """The kernel value at the origin is too small to divide by."""


class PreconditionError(CwtInvError, ValueError):
    """Input violates a mathematical precondition of a method."""


class AdmissibilityError(CwtInvError, ValueError):
    """A method needing an admissible kernel received a non-admissible one."""
