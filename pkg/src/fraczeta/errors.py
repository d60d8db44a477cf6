"""Exception types shared across the package."""


class FracZetaError(Exception):
    """Base class for all package errors."""


class DomainError(FracZetaError, ValueError):
    """An argument lies outside the domain of an operation."""


class LookupFailure(FracZetaError, KeyError):
    """Unknown catalog, space or set name."""

    def __init__(self, kind, name, valid):
        self.kind = kind
        self.name = name
        self.valid = tuple(valid)
        super().__init__(f"unknown {kind} {name!r}; valid names: {', '.join(self.valid)}")

    def __str__(self):
        return self.args[0]


class PoleError(FracZetaError, ArithmeticError):
    """Evaluation requested at a pole."""


class NotAPoleError(FracZetaError, ValueError):
    """Residue requested at a point that is not a pole."""


class UnsupportedOrderError(FracZetaError, NotImplementedError):
    """Residue requested at a pole of order two or more."""


class InstabilityError(FracZetaError, ArithmeticError):
    """A contour quadrature failed to converge to an integer winding count."""


class QuadratureError(FracZetaError, ArithmeticError):
    """Adaptive quadrature did not converge."""


class InsufficientRangeError(FracZetaError, ValueError):
    """Tube data does not span enough scales for a dimension fit."""
