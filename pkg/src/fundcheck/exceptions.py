"""Exception types raised across the library."""


class FundcheckError(Exception):
    """Base class for all library errors."""


class InvalidInput(FundcheckError):
    """Malformed or out-of-contract input (shapes, finiteness, graph structure)."""


class RankError(FundcheckError):
    """A matrix does not have the numerical rank an operation requires."""


class InvalidCamera(FundcheckError):
    """A 3x4 matrix is not a valid camera (rank below 3)."""


class CoincidentCenters(InvalidCamera):
    """Two cameras share a center, so their fundamental matrix is undefined."""

    def __init__(self, i, j):
        super().__init__(f"coincident centers ({i},{j})")
        self.pair = (i, j)


class GraphError(FundcheckError):
    """An edge required by an operation is missing from the set or graph."""


class DegenerateConfiguration(FundcheckError):
    """Numerically degenerate epipole configuration; result would be unreliable."""


class ScaleRecoveryError(FundcheckError):
    """Per-edge scales consistent with a camera solution could not be recovered."""


class CycleConditionViolated(FundcheckError):
    """Skew edge data does not sum to zero around some cycle of the graph."""


class ReconstructionFailed(FundcheckError):
    """No camera set reproduces every matrix of the input within tolerance."""

    def __init__(self, message, edge=None, residual=None):
        super().__init__(message)
        self.edge = edge
        self.residual = residual


class SchemaError(InvalidInput):
    """A JSON document does not follow the expected schema."""
