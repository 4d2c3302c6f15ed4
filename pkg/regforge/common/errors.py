"""
Exception hierarchy shared by all regforge modules.
Each error carries the process exit code the CLI maps it to.
"""


class RegforgeError(Exception):
    """Base class for every error raised by regforge"""
    exit_code = 1


class InputError(RegforgeError, ValueError):
    """Malformed input or an unmet precondition of an operation"""
    exit_code = 2


class CapExceededError(RegforgeError):
    """An exhaustive enumeration would exceed its configured cap"""
    exit_code = 3


class NonIntegerExponentError(RegforgeError, ArithmeticError):
    """A tower quantity that must be an exact power of two is not one"""


class IncomparableError(RegforgeError, ArithmeticError):
    """Two symbolic tower values cannot be ordered from the bounds they carry"""
