"""Exception types raised on invalid input.

Every validation failure derives from :class:`ValidationError`, which the
command line front end maps to exit status 2.
"""


class ValidationError(ValueError):
    """Base class for rejected input."""

    @property
    def kind(self):
        return type(self).__name__

    def to_json(self):
        return {"type": self.kind, "message": str(self)}


class OrderingViolation(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class DegeneratePolygon(ValidationError):
    pass


class InconsistentDegrees(ValidationError):
    pass


class NotInLambda(ValidationError):
    pass


class InfeasibleDegree(ValidationError):
    pass


class ZeroEntry(ValidationError):
    pass


class OnWall(ValidationError):
    def __init__(self, message, wall=None):
        super().__init__(message)
        self.wall = wall


class InsufficientSamples(ValidationError):
    pass


class RankDeficient(ValidationError):
    pass


class InconsistentSamples(ValidationError):
    pass


class TruncationTooSmall(ValidationError):
    pass


class DegenerateDimension(ValidationError):
    pass


class UnboundedPolytope(ValidationError):
    pass
