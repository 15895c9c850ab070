"""Exception hierarchy shared across the package."""


class ChoreMarketError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidInstanceError(ChoreMarketError):
    """Raised when an instance (or allocation/weight input) fails validation."""


class CapExceededError(ChoreMarketError):
    """Raised when an enumeration would exceed its configured size cap."""


class UnrealizableProfileError(ChoreMarketError):
    """Raised by leaf peeling when a (graph, utility profile) pair admits no allocation."""


class NonUnitCycleError(ChoreMarketError):
    """Raised when cycle elimination meets a trading cycle whose disutility product is not 1.

    Such a cycle means the input allocation was not Pareto optimal, so the
    indifference-preserving transfer that elimination relies on does not exist.
    """


class CertificateError(ChoreMarketError):
    """Raised when a fairness certificate that is guaranteed by construction fails.

    This always indicates a bug, never a property of the input.
    """
