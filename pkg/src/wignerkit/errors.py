"""Exception hierarchy.

Every error raised on purpose by the package derives from ``WignerKitError``,
which is itself a ``ValueError`` so callers can catch either.
"""


class WignerKitError(ValueError):
    pass


# numerical kernel
class NonFinite(WignerKitError):
    pass


class NoConvergence(WignerKitError):
    pass


class NotOrthonormal(WignerKitError):
    pass


class NotAProjection(WignerKitError):
    pass


class DimensionError(WignerKitError):
    """Shapes or dimensions do not fit together."""


class WrongDim(DimensionError):
    pass


class WrongRank(WignerKitError):
    pass


class RankMismatch(WignerKitError):
    pass


# coordinates / operators
class NotUnitary(WignerKitError):
    pass


class NonLinear(WignerKitError):
    pass


class FormatError(WignerKitError):
    pass


# geometry
class Degenerate(WignerKitError):
    pass


class Orthogonal(WignerKitError):
    pass


class NotOnCircle(WignerKitError):
    pass


class BadInterval(WignerKitError):
    pass


class GeometryError(WignerKitError):
    """An internal consistency check between two equivalent geometric tests failed."""


# classifier
class Ambiguous(WignerKitError):
    """Input sits between tolerance scales; no verdict is given."""


class NotOrthogonalImages(Ambiguous):
    pass


class PhaseNotUnimodular(Ambiguous):
    pass


class AntilinearityInconsistent(Ambiguous):
    pass
