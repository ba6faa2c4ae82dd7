class PzfLabError(Exception):
    """Base exception for application-level errors."""


class InvalidParameterError(PzfLabError):
    """Raised when a generator, bound or solver receives out-of-range parameters."""


class FamilyNotFoundError(PzfLabError):
    """Raised when a graph family name cannot be resolved."""


class GraphFormatError(PzfLabError):
    """Raised when edge-list text cannot be parsed."""


class MalformedLineError(GraphFormatError):
    """Raised when a header or edge line is not two integers."""


class VertexRangeError(GraphFormatError):
    """Raised when an edge names a vertex outside 0..n-1."""


class DuplicateEdgeError(GraphFormatError):
    """Raised when the same undirected edge appears twice."""


class SelfLoopError(GraphFormatError):
    """Raised when an edge joins a vertex to itself."""


class DisconnectedGraphError(PzfLabError):
    """Raised when an operation requires a connected graph."""


class SolverCapExceededError(PzfLabError):
    """Raised when a graph is too large for the exact solver."""

    def __init__(self, n: int, cap: int) -> None:
        super().__init__(f"Graph has {n} vertices, exceeds exact-solver cap of {cap}")
        self.n = n
        self.cap = cap


class PreconditionError(PzfLabError):
    """Raised when a forcing query violates its color preconditions."""


class InvalidStartError(PzfLabError):
    """Raised when a start set is empty or names unknown vertices."""


class StallError(PzfLabError):
    """Raised when a modified-process phase cannot make progress."""


class CommandUsageError(PzfLabError):
    """Raised by ``parse_args`` when command-line arguments are rejected (exit code 2)."""
