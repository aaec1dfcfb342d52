"""Exception types.

Everything raised on purpose derives from ``GkpError``.  ``ValidationError``
marks malformed input (bad shapes, unparsable literals); every other subclass
is a domain error, i.e. well-formed input outside an operation's domain.
"""


class GkpError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GkpError, ValueError):
    """Input could not be parsed or has the wrong shape."""


class DimensionMismatch(ValidationError):
    pass


class NotIntegral(GkpError):
    def __init__(self, entry, deviation):
        self.entry = entry
        self.deviation = deviation
        super().__init__(f"entry {entry} deviates from the nearest integer by {deviation:.3g}")


class Degenerate(GkpError):
    pass


class UnsupportedDimension(GkpError):
    pass


class NotSymplectic(GkpError):
    pass


class ZeroVector(GkpError):
    pass


class NotUpperHalfPlane(GkpError):
    pass


class EmptyCoset(GkpError):
    pass


class NotAutomorphism(GkpError):
    pass


class NotHyperbolic(GkpError):
    pass


class NotHyperbolicModQ(GkpError):
    pass


class NotPrime(GkpError):
    pass


class TooLarge(GkpError):
    pass


class DegenerateDenominator(GkpError):
    pass


class SlowConvergence(GkpError):
    pass


class OnLattice(GkpError):
    pass


class BothZero(GkpError):
    pass


class NotClosed(GkpError):
    def __init__(self, deviation):
        self.deviation = deviation
        super().__init__(f"path endpoints are not related by an integral matrix (deviation {deviation:.3g})")


class ZeroDistanceCrossing(GkpError):
    pass


class NonIntegerWinding(GkpError):
    pass


class RootCollision(GkpError):
    pass


class NotInGammaD(GkpError):
    pass


class CoincidentRoots(GkpError):
    pass


class QuadratureFailure(GkpError):
    pass


class SingularBlock(GkpError):
    pass


class NotPositive(GkpError):
    pass


class NotPositiveDefinite(GkpError):
    pass


class ComplexRoots(GkpError):
    pass
