"""Exception types shared across the package."""


class NPBError(Exception):
    """Base class for all library errors."""


class NotContained(NPBError):
    pass


class ShapeMismatch(NPBError):
    pass


class NotAssociative(NPBError):
    pass


class NotAnIdeal(NPBError):
    pass


class VarietyMismatch(NPBError):
    pass


class ActionAxiomsFail(NPBError):
    pass


class GuardExceeded(NPBError):
    pass


class NotExact(NPBError):
    pass


class RangeTooSmall(NPBError):
    pass


class ParseError(NPBError):
    pass
