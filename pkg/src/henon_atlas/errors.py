"""Exception hierarchy shared by all henon_atlas modules."""


class HenonAtlasError(Exception):
    """Base class for every error raised by this package."""


class Escape(HenonAtlasError):
    """An iterate left the finite domain (overflow or escape radius)."""


class NotInvertible(HenonAtlasError):
    pass


class DegenerateFamily(HenonAtlasError):
    pass


class NotAFixedPoint(HenonAtlasError):
    pass


class NoRealFixedPoints(HenonAtlasError):
    pass


class SingularLinearPart(HenonAtlasError):
    pass


class NotASaddle31(HenonAtlasError):
    """Saddle value requested for a point without exactly one unstable multiplier."""


class AssumptionViolated(HenonAtlasError):
    """A region test was called outside its validity range (it needs B > 0)."""


class NoUnstableDirection(HenonAtlasError):
    pass


class NoStableDirection(HenonAtlasError):
    pass


class WrongSplitting(HenonAtlasError):
    """The stable eigenspace of the origin is not two-dimensional."""


class SpecFileError(HenonAtlasError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        super().__init__(f"{where}{message}")
