"""Exception hierarchy shared by every module."""


class HypercubeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HypercubeError, ValueError):
    """An argument lies outside the domain of the operation."""


class SizeLimitError(DomainError):
    """A requested dimension or vertex count exceeds the supported cap."""


class NoPathError(HypercubeError):
    """Two vertices lie in different connected components."""


class PreconditionError(DomainError):
    """An input violates a documented precondition."""


class InfeasibleCoverError(HypercubeError):
    """Some element of P has no neighbour in Q."""


class EnumerationLimitError(HypercubeError):
    """An exhaustive enumeration exceeded its budget.

    ``progress`` carries whatever partial information the enumerator had
    gathered when it stopped.
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress if progress is not None else {}


class ConstructionFailure(HypercubeError):
    """Randomized construction gave up after ``max_retries`` attempts."""

    def __init__(self, message, observed=None):
        super().__init__(message)
        self.observed = observed if observed is not None else {}


class GraphFormatError(HypercubeError, ValueError):
    """Malformed bipartite edge-list file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphParseError(GraphFormatError):
    pass


class RegularityError(GraphFormatError):
    pass


class BipartitenessError(GraphFormatError):
    pass
