"""Exception hierarchy for lpx."""


class LpxError(Exception):
    """Base class for all lpx errors."""


class GraphError(LpxError, ValueError):
    """Invalid graph input."""


class EmptyInputError(GraphError):
    pass


class MalformedLineError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


class NotRegularError(LpxError, ValueError):
    pass


class NotBiregularError(LpxError, ValueError):
    pass


class RadiusTooLargeError(LpxError, ValueError):
    pass


class ZeroThetaError(LpxError, ValueError):
    pass


class OutOfRangeError(LpxError, ValueError):
    pass


class BadEpsilonError(LpxError, ValueError):
    pass


class BadParametersError(LpxError, ValueError):
    pass


class SupportTooDeepError(LpxError, ValueError):
    pass


class GenerationFailedError(LpxError, RuntimeError):
    pass


class ConvergenceFailureError(LpxError, RuntimeError):
    pass


class FormDisagreementError(LpxError, ArithmeticError):
    """The two closed forms of A_k(theta) disagree beyond tolerance."""
