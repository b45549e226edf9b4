"""Exception hierarchy shared by every module."""


class PPPError(Exception):
    """Base class for toolkit errors."""


class InputArityError(PPPError, ValueError):
    """An input vector has the wrong length."""


class UnsupportedGateError(PPPError, ValueError):
    """A gate kind is not allowed by the requested operation."""


class WidthError(PPPError, ValueError):
    """A gadget cannot be built at the requested bit width."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class RangeError(PPPError, ValueError):
    """A value does not fit the requested encoding."""


class ShapeError(PPPError, ValueError):
    """Matrix or vector dimensions are inconsistent."""


class ModulusMismatchError(PPPError, ValueError):
    """Two operands carry different moduli."""


class SingularMatrixError(PPPError, ValueError):
    """A square matrix has determinant zero."""


class ParameterError(PPPError, ValueError):
    """Parameters violate an instance or key invariant."""


class PreconditionError(PPPError, ValueError):
    """An input violates the precondition of a reduction."""


class OracleTooLargeError(PPPError):
    """Exhaustive search would exceed the evaluation budget."""


class NotACollisionError(PPPError, ValueError):
    """Two hash inputs do not form a collision."""


class MalformedError(PPPError, ValueError):
    """A serialized artifact cannot be parsed."""
