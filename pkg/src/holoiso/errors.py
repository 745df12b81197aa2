"""Exception types raised across the package."""


class HoloisoError(Exception):
    """Base class for all package errors."""


class ZeroPolynomial(HoloisoError, ValueError):
    pass


class SampleAtSingularity(HoloisoError, ValueError):
    pass


class NotBlaschkeForm(HoloisoError, ValueError):
    pass


class NotUnitary(HoloisoError, ValueError):
    def __init__(self, residual):
        super().__init__(f"matrix is not unitary (residual {residual:.3e})")
        self.residual = residual


class InvalidZeta(HoloisoError, ValueError):
    pass


class DegenerateFrame(HoloisoError, ValueError):
    """det U'' vanishes; the first component is identically zero."""


class ContinuationFailure(HoloisoError, RuntimeError):
    pass


class OutsideDomain(HoloisoError, ValueError):
    pass


class NothingToPeel(HoloisoError, ValueError):
    pass


class HypothesisViolated(HoloisoError, ValueError):
    pass


class ShapeMismatch(HoloisoError, ValueError):
    pass


class NotMember(HoloisoError, ValueError):
    pass


class PoleOnGrid(HoloisoError, ValueError):
    pass


class NotAnIsometry(HoloisoError, ValueError):
    pass


class ConclusionViolated(HoloisoError, AssertionError):
    def __init__(self, detail):
        super().__init__(f"rigidity conclusion violated: {detail}")
        self.detail = detail


class CrossCheckMismatch(HoloisoError, ArithmeticError):
    """Two independent constructions of the same object disagree."""
