"""Exception hierarchy shared by every routing algorithm and harness."""


class RoutingError(Exception):
    """Base class for all errors raised by nmroute.

    Searches that give up attach the work they did as ``counters``.
    """

    counters = None


class ConfigurationError(RoutingError, ValueError):
    """Inputs are malformed or mutually inconsistent (arity mismatch, bad ranges)."""


class InvalidPathError(RoutingError, ValueError):
    """A vertex sequence does not follow edges of the graph."""


class GraphFormatError(ConfigurationError):
    """A graph or request file could not be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Unreachable(RoutingError):
    """The destination is not connected to the source over link-feasible edges."""


class NoFeasiblePath(RoutingError):
    """The destination is reachable but every simple path violates a path bound."""


class MaxLengthExceeded(RoutingError):
    """Neighborhoods cannot grow past the vertex count."""


class NegativeCycle(RoutingError):
    """Relaxations kept improving after |V| levels."""


class SearchTimeout(RoutingError):
    """A query ran past its deadline."""
