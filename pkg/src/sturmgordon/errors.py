"""Exception types raised by sturmgordon."""


class InvalidParameter(ValueError):
    """A numeric argument is outside the admissible range."""


class InvalidCombination(ValueError):
    """Two objects cannot be combined (e.g. incommensurable periods)."""


class PrecisionError(ArithmeticError):
    """The requested computation needs more working precision than allowed."""
