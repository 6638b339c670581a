class CvxLabError(Exception):
    """Base class of the domain errors; `code` is the stable name written to error reports."""
    code = "cvxlab_error"


class EmptyPolyhedron(CvxLabError):
    """Raised when a halfspace system has no solution."""
    code = "EmptyPolyhedron"


class UnboundedInput(CvxLabError):
    """Raised when an operation needs a bounded set and receives one with recession rays."""
    code = "UnboundedInput"


class DegenerateBody(CvxLabError):
    """Raised when an operation needs a full-dimensional body."""
    code = "DegenerateBody"


class EmptyLevelSet(CvxLabError):
    """Raised when a sub-level set is requested below the infimum."""
    code = "EmptyLevelSet"


class NonConvexMin(CvxLabError):
    """Raised when the pointwise minimum of two functions is not convex."""
    code = "NonConvexMin"


class ImproperInput(CvxLabError):
    """Raised when a function is not closed proper convex, or its data cannot describe one."""
    code = "ImproperInput"


class NotGeometric(CvxLabError):
    """Raised when a function is required to be nonnegative and to vanish at the origin."""
    code = "NotGeometric"


class NotIntegrable(CvxLabError):
    """Raised when exp(-phi) must have finite positive mass and does not."""
    code = "NotIntegrable"


class NotCentered(CvxLabError):
    """Raised when the centroid is required to be the origin."""
    code = "NotCentered"


class NotEven(CvxLabError):
    code = "NotEven"


class IllPositioned(CvxLabError):
    """Raised when the origin is not in the interior of the effective domain."""
    code = "IllPositioned"


class DimensionMismatch(CvxLabError):
    code = "DimensionMismatch"


class TooManyParameters(CvxLabError):
    """Raised when the brute-force oracle is asked to scan more parameters than it supports."""
    code = "TooManyParameters"


class UnsupportedDimension(CvxLabError):
    code = "UnsupportedDimension"
