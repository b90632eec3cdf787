"""Exception types raised across the package."""


class MagnonError(Exception):
    """Base class for all package errors."""


class ArgumentError(MagnonError, ValueError):
    pass


class UnitarityError(MagnonError, ValueError):
    pass


class MatrixError(MagnonError, ValueError):
    pass


class BasisError(MagnonError, ValueError):
    pass


class NormalizationError(MagnonError, ValueError):
    pass


class InfeasibleError(MagnonError):
    """A constraint family admits no solution under the requested reading."""


class ChannelError(MagnonError):
    """The channel amplitudes fail the constraint family a protocol needs.

    The offending :class:`~magnonqi.magnon.ConstraintReport` is attached as
    ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class CircuitDiscrepancy(MagnonError):
    """A transcribed circuit does not produce the state it is drawn to produce."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class UnresolvedConstraintError(MagnonError):
    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence
