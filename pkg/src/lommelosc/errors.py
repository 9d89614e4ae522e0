"""Error types raised by the package."""


class LommelOscError(Exception):
    """Base class for all package errors."""


class PoleError(LommelOscError):
    """Argument sits on (or within tolerance of) a pole."""


class ConvergenceError(LommelOscError):
    """No evaluation regime reached the requested accuracy."""


class SectorError(LommelOscError):
    """Argument lies outside the validity sector of an expansion."""


class AccuracyError(LommelOscError):
    """Modulus too small for the requested truncation order."""


class BranchError(LommelOscError):
    """Point is not on the branch the operation requires."""


class NotDegenerateError(LommelOscError):
    """Parameters do not give a terminating Lommel series."""


class DegenerateDenominator(LommelOscError):
    """Continuation coefficient denominator vanishes."""


class UnsupportedCase(LommelOscError):
    """A dispatch branch could not be evaluated."""


class ValidityError(LommelOscError):
    """Wright validity inequalities fail for this n."""


class HypothesisError(LommelOscError):
    """A stated hypothesis gate fails."""

    def __init__(self, message, smallest_m=None):
        super().__init__(message)
        self.smallest_m = smallest_m


class DivergenceError(LommelOscError):
    """Newton iteration did not converge."""


class BoxEscapeError(LommelOscError):
    """Newton iterate left its bound box."""


class ParamError(LommelOscError):
    """Invalid parameter combination."""


class DegenerateQuadratic(LommelOscError):
    """The quadratic behind the closed-form zeros has a zero root."""


class ZeroOnContour(LommelOscError):
    """A zero lies on (or too close to) the integration contour."""


class QuadratureError(LommelOscError):
    """Adaptive quadrature exhausted its sample budget."""


class DerivativeError(LommelOscError):
    """No derivative path is available."""
