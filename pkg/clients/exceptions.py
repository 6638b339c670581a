class SolverError(Exception):
    pass


class HullComputationError(SolverError):
    """Raised when qhull fails on a triangulation."""
    pass


class LinearProgramError(SolverError):
    """Raised when the LP backend stops without a usable status (iteration limit, numerical trouble)."""
    pass


class EllipsoidSolverError(SolverError):
    """Raised when the conic solver does not reach an optimal status for the ellipsoid program."""
    pass


class DoubleDescriptionError(SolverError):
    """Raised when cddlib fails to convert between halfspaces and generators."""
    pass
