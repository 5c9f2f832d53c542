"""Exception hierarchy shared by all modules."""


class HSError(Exception):
    """Base class for every error raised by this package."""


class InvalidField(HSError):
    pass


class DegenerateInput(HSError):
    pass


class ZeroDivisor(HSError):
    pass


class NotDivisible(HSError):
    pass


class RingMismatch(HSError):
    pass


class LengthExceeded(HSError):
    pass


class LengthMismatch(HSError):
    pass


class NotLogarithmic(HSError):
    """The length-1 input derivation does not map h into <h>."""

    def __init__(self, message, residue=None):
        super().__init__(message)
        self.residue = residue


class NotLogarithmicPrefix(NotLogarithmic):
    pass


class Infeasible(HSError):
    """No solution of a step equation within the degree bound."""


class BudgetExceeded(HSError):
    def __init__(self, message, explored=0):
        super().__init__(message)
        self.explored = explored


class NotApplicable(HSError):
    pass


class UsePowerReduce(HSError):
    pass


class NotAPowerCase(HSError):
    pass


class NotALeap(HSError):
    pass


class NoInverse(HSError):
    pass


class ParseError(HSError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
