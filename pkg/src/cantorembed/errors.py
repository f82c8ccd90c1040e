"""Exception hierarchy shared by all engines."""


class CantorEmbedError(Exception):
    """Base class; the CLI maps these to exit code 3."""


class ZeroPolynomial(CantorEmbedError, ValueError):
    pass


class RootNotIsolated(CantorEmbedError, ValueError):
    pass


class RootNotGreaterThanOne(CantorEmbedError, ValueError):
    pass


class MultipleRootsInSelector(CantorEmbedError, ValueError):
    pass


class NotPisot(CantorEmbedError, ValueError):
    pass


class RationalTheta(CantorEmbedError, ValueError):
    pass


class InvalidLetter(CantorEmbedError, ValueError):
    pass


class DepthBudgetExceeded(CantorEmbedError, RuntimeError):
    pass


class IncommensurableRatios(CantorEmbedError, ValueError):
    pass


class DataOutsideField(CantorEmbedError, ValueError):
    pass


class StateBudgetExceeded(CantorEmbedError, RuntimeError):
    def __init__(self, message, states_reached=None):
        super().__init__(message)
        self.states_reached = states_reached


class NotApplicable(CantorEmbedError, ValueError):
    pass


class ScaleConditionViolated(CantorEmbedError, ValueError):
    pass


class CodingAmbiguous(CantorEmbedError, ValueError):
    pass


class NotInAttractor(CantorEmbedError, ValueError):
    pass


class NoExpansionExists(CantorEmbedError, ValueError):
    pass


class BudgetExceeded(CantorEmbedError, RuntimeError):
    pass


class ScaleOutOfRange(CantorEmbedError, ValueError):
    pass


class NotConstructible(CantorEmbedError, ValueError):
    pass


class PrefixTooShort(CantorEmbedError, ValueError):
    pass


class CommensurableBases(CantorEmbedError, ValueError):
    pass


class ReplayFailed(CantorEmbedError):
    pass
