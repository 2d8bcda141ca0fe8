"""Exception hierarchy shared by all modules."""


class TwoPhotonError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TwoPhotonError, ValueError):
    """A query or construction outside the declared domain of an object."""


class ConfigurationError(TwoPhotonError, ValueError):
    """Invalid run or grid configuration.

    ``field`` names the offending configuration entry when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class InvalidBeamSplitterError(ConfigurationError):
    pass


class UnsupportedDecompositionError(TwoPhotonError):
    pass


class PreconditionError(TwoPhotonError, ValueError):
    pass


class NumericalDomainError(TwoPhotonError, ArithmeticError):
    """Non-finite integrand value met at a quadrature node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NumericalConsistencyError(TwoPhotonError, ArithmeticError):
    """A computed rate is negative beyond round-off slack."""
