"""Exception hierarchy shared by every module.

Each computational failure has its own class so callers (and the CLI exit-code
mapping) can tell input problems from resource truncation from genuine
property failures.
"""


class DynDegError(Exception):
    """Base class for all package errors."""


# -- input / parsing -------------------------------------------------------

class ParseError(DynDegError, ValueError, SyntaxError):
    """Malformed expression or job file. Carries a 1-based line/column."""

    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        self.line = self.column = None
        self.detail = message
        if text is not None and pos is not None:
            before = text[:pos]
            self.line = before.count("\n") + 1
            self.column = pos - (before.rfind("\n") + 1) + 1
            message = f"{message} (line {self.line}, column {self.column})"
        super().__init__(message)
        self.msg = message
        self.lineno, self.offset = self.line, self.column

    def __str__(self):
        return self.msg


class UnknownVariable(ParseError):
    pass


class HomogeneityError(DynDegError, ValueError):
    """Terms of unequal per-block degree."""


class ValidationError(DynDegError, ValueError):
    pass


class SpaceMismatch(DynDegError, ValueError):
    pass


class DimensionMismatch(DynDegError, ValueError):
    pass


# -- maps ---------------------------------------------------------------

class ZeroMap(DynDegError, ValueError):
    pass


class NotDominant(DynDegError, ValueError):
    pass


class SingularMatrix(DynDegError, ValueError):
    pass


# -- sequences / numerics ---------------------------------------------------

class ResourceLimit(DynDegError):
    """Term-count or coefficient-size cap exceeded.

    ``partial`` holds whatever was computed before the cap was hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EmptySequence(DynDegError, ValueError):
    pass


class NonConvergence(DynDegError, ArithmeticError):
    pass


# -- lattices ---------------------------------------------------------------

class NotInvariant(DynDegError, ValueError):
    pass


class Infeasible(DynDegError, ValueError):
    pass


class ConeNotPreserved(DynDegError):
    verdict = "HYPOTHESIS_NOT_MET"


# -- relative ---------------------------------------------------------------

class NotTriangular(DynDegError, ValueError):
    pass


class WitnessFailed(DynDegError):
    pass


class DegenerateFibers(DynDegError):
    pass


class ShapeMismatch(DynDegError, ValueError):
    pass


class UnknownSuite(DynDegError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
