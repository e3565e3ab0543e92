"""Exception hierarchy shared by every module of the package."""


class BooleanInfoError(Exception):
    """Base class for all errors raised by this package."""


class InputError(BooleanInfoError, ValueError):
    """Malformed or out-of-contract input (schema, normalization, parameters)."""


class DomainError(BooleanInfoError, ValueError):
    """A quantity is undefined at the given input (e.g. odd negative moment at 0)."""


class SymmetryError(BooleanInfoError, ValueError):
    """An operation restricted to symmetric measures received a non-symmetric one."""


class NotACauchyTransform(BooleanInfoError, ArithmeticError):
    """A rational function failed to invert to a probability measure."""


class CapacityError(BooleanInfoError, ArithmeticError):
    """Polynomial degree beyond the supported cap."""


class IndeterminateError(BooleanInfoError, ArithmeticError):
    """A comparison has no well-defined value (e.g. 0/0 in a degenerate bound)."""
