"""Exception hierarchy shared by every stage of the engine."""


class BlpError(Exception):
    """Base class for all engine errors."""

    category = "error"


class BlpSyntaxError(BlpError, SyntaxError):
    """Malformed program or query text, with a 1-based source location."""

    category = "syntax error"

    def __init__(self, message, line=0, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
        self.lineno = line
        self.offset = column


class ValidationError(BlpError, ValueError):
    category = "validation error"


class NonGroundQueryError(ValidationError):
    category = "non-ground query"


class EvidenceTypeError(BlpError, TypeError):
    category = "evidence type error"


class ResourceExceeded(BlpError):
    """A search or enumeration bound was hit before a result was available."""

    category = "resource exceeded"


class UndefinedVariableError(BlpError):
    """A requested atom is not in the least Herbrand model."""

    category = "undefined variable"


class CycleError(BlpError):
    category = "cycle"

    def __init__(self, message, cycle=()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class RuleArityError(BlpError):
    category = "combining rule arity"


class DomainError(BlpError, ValueError):
    category = "domain error"


class UnknownRuleError(BlpError, LookupError):
    category = "unknown combining rule"


class InconsistentEvidenceError(BlpError):
    category = "inconsistent evidence"


class SingularEvidenceError(BlpError):
    category = "singular evidence"


class UnsupportedModelError(BlpError):
    category = "unsupported model"


class NameCollisionError(BlpError):
    category = "name collision"
