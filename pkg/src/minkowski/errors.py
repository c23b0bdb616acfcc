"""Exception types raised by the geometry, transform and certification layers."""


class GeometryError(ValueError):
    """Base class for every contract violation reported by this package."""


class BackendMismatch(GeometryError):
    """Exact rationals and floats were mixed in one value or operation."""


class DimensionMismatch(GeometryError):
    pass


class ZeroVector(GeometryError):
    pass


class CoincidentPoints(GeometryError):
    pass


class DegenerateSpan(GeometryError):
    pass


class PointNotInPlane(GeometryError):
    pass


class PointsNotInPlane(PointNotInPlane):
    pass


class NotLorentzPlane(GeometryError):
    pass


class NotPairwiseSpacelike(GeometryError):
    pass


class NotLightLike(GeometryError):
    pass


class NonIntersecting(GeometryError):
    pass


class IdenticalLines(GeometryError):
    pass


# hyperboloid layer

class NonPositiveFactor(GeometryError):
    pass


class OffCenter(GeometryError):
    pass


class RadiusMismatch(GeometryError):
    pass


class LightLikePair(GeometryError):
    """No hyperboloid contains two distinct points in light-like position."""


class InfeasibleExponent(GeometryError):
    """A time-like pair is too close for a hyperboloid of the requested radius."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NotOnHyperboloid(GeometryError):
    pass


class SearchExhausted(GeometryError):
    pass


class DegenerateConfiguration(GeometryError):
    pass


class NotAHyperboloid(GeometryError):
    pass


class InconsistentPoints(GeometryError):
    pass


# transform layer

class NotSquare(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


class NotLorentz(GeometryError):
    pass


class NotTimeLike(GeometryError):
    pass


class NormMismatch(GeometryError):
    pass


class NotConformal(GeometryError):
    pass


class NotInExtendedGroup(NotConformal):
    """The linear part is not a positive multiple of a Lorentz matrix."""


class ResidualNotIdentity(GeometryError):
    pass


# certification layer

class InverseInconsistent(GeometryError):
    pass


class UnknownSuite(GeometryError):
    pass
