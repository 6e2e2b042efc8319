"""Exception types raised across the package."""


class UcptError(Exception):
    """Base class for all library errors."""


class DivideByZero(UcptError, ZeroDivisionError):
    pass


class NotDivisible(UcptError, ArithmeticError):
    pass


class NotInField(UcptError, ValueError):
    """A requested value (for instance a square root) has no exact representation."""


class ShapeError(UcptError, ValueError):
    pass


class NotHermitian(UcptError, ValueError):
    pass


class BadDimension(UcptError, ValueError):
    pass


class NotUnitary(UcptError, ValueError):
    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect


class BadParameters(UcptError, ValueError):
    pass


class ExplicitTooLarge(UcptError, ValueError):
    pass


class PreconditionFailed(UcptError, ValueError):
    pass


class BadIndices(UcptError, ValueError):
    pass


class BadCase(UcptError, ValueError):
    pass


class BadDistribution(UcptError, ValueError):
    pass
