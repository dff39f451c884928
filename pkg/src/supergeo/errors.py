"""Exception hierarchy shared by all subpackages."""


class SuperGeoError(Exception):
    """Base class; ``context`` is a JSON-friendly dict used by the CLI."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class DimensionError(SuperGeoError, ValueError):
    pass


class NotInvertibleError(SuperGeoError, ZeroDivisionError):
    pass


class ParseError(SuperGeoError, ValueError):
    """Raised for malformed expression text; ``position`` is 1-based."""

    def __init__(self, message, text="", position=None):
        super().__init__(message, text=text, position=position)
        self.text = text
        self.position = position


class DomainError(SuperGeoError, ArithmeticError):
    """Evaluation left the domain of a function (log of nonpositive body etc.)."""


class ParityError(SuperGeoError, ValueError):
    pass


class DegeneracyError(SuperGeoError):
    """A determinant that decides a sign is too close to zero."""


class NonTransversalError(DegeneracyError):
    pass


class ResolutionError(SuperGeoError):
    """Root clustering is ambiguous at the requested grid density."""


class ModelError(SuperGeoError, ValueError):
    """Structurally invalid model, morphism or job description."""


class OrientationError(SuperGeoError):
    pass
