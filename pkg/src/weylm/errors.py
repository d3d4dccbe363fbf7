"""Exception hierarchy shared by every stage of the enclosure pipeline."""


class EnclosureError(Exception):
    """Base class: a rigorous enclosure could not be certified."""


class IntervalOverflow(EnclosureError, OverflowError):
    pass


class DivisionByIntervalContainingZero(EnclosureError, ZeroDivisionError):
    pass


class DivisorBoxContainsZero(DivisionByIntervalContainingZero):
    pass


class BranchCutStraddle(EnclosureError, ValueError):
    pass


class NegativeBaseFractionalPower(EnclosureError, ValueError):
    pass


class IncompatibleDomain(EnclosureError, ValueError):
    pass


class RatioNotLessThanOne(EnclosureError, ValueError):
    pass


class NormNotContractive(EnclosureError):
    pass


class UnderivableTail(EnclosureError):
    pass


class NonIntegrableDecay(EnclosureError):
    pass


class DichotomyUnverifiable(EnclosureError):
    pass


class SignUndetermined(EnclosureError):
    pass


class NonSmoothCenter(EnclosureError, ValueError):
    pass


class EnclosureFailure(EnclosureError):
    """The a-priori step enclosure could not be verified.

    ``x`` records the abscissa at which the failing step started.
    """

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class ContractionFailed(EnclosureError):
    pass


class DenominatorContainsZero(EnclosureError):
    pass
