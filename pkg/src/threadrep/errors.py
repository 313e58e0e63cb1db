"""Exception types shared across the package.

Every error carries a stable ``name`` that the command line prints when a
precondition fails.
"""


class ThreadRepError(Exception):
    name = "ThreadRepError"

    def __init__(self, message="", witness=None):
        super().__init__(message or self.name)
        self.witness = witness


class FieldMismatch(ThreadRepError):
    name = "FieldMismatch"


class SmallCharacteristic(ThreadRepError):
    name = "SmallCharacteristic"


class ExtendField(ThreadRepError):
    """The semisimple quotient is a proper field extension of the base field.

    ``degree`` is the extension degree and ``modulus`` an irreducible
    polynomial (coefficients low to high) defining it.
    """

    name = "ExtendField"

    def __init__(self, degree, modulus=None, message=""):
        super().__init__(message or f"ExtendField({degree})")
        self.degree = degree
        self.modulus = modulus


class MalformedPartition(ThreadRepError):
    name = "MalformedPartition"


class EndpointMismatch(ThreadRepError):
    name = "EndpointMismatch"


class NotHomFinite(ThreadRepError):
    name = "NotHomFinite"


class CellMismatch(ThreadRepError):
    name = "CellMismatch"


class InvalidDimVec(ThreadRepError):
    name = "InvalidDimVec"


class IncompatiblePartition(ThreadRepError):
    name = "IncompatiblePartition"


class RelationViolation(ThreadRepError):
    name = "RelationViolation"


class NotLeftBounded(ThreadRepError):
    name = "NotLeftBounded"


class ResolutionTooLong(ThreadRepError):
    name = "ResolutionTooLong"


class NotBiserial(ThreadRepError):
    name = "NotBiserial"


class ParseError(ThreadRepError):
    name = "ParseError"
