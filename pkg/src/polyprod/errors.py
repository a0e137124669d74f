"""Exception types raised across the package."""


class PolyprodError(Exception):
    """Base class for all package errors."""


class PhaseMismatch(PolyprodError, ArithmeticError):
    """Addition of exact scalars lying on different rays."""


class ShapeError(PolyprodError, ArithmeticError):
    """Matrix arithmetic between incompatible shapes."""


class NotSamplable(PolyprodError):
    """The carrier has no sampler attached."""


class ArityMismatch(PolyprodError):
    pass


class ClosureViolation(PolyprodError):
    """An operation produced a value outside its carrier."""

    def __init__(self, message, polyad=None, value=None):
        super().__init__(message)
        self.polyad = polyad
        self.value = value


class NotInCarrier(PolyprodError):
    pass


class NoSolution(PolyprodError):
    pass


class QuerMismatch(PolyprodError):
    """A declared quer program disagrees with brute force."""


class IncompatibleArities(PolyprodError):
    pass


class ArityShapeMismatch(PolyprodError):
    pass


class NotQuantized(PolyprodError):
    pass


class InvalidQuiver(PolyprodError):
    pass


class NotAssociative(PolyprodError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAField(PolyprodError):
    def __init__(self, message, witness=None, reason=None):
        super().__init__(message)
        self.witness = witness
        self.reason = reason


class UnknownEntry(PolyprodError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(PolyprodError):
    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.col = col
