"""Exception hierarchy.

Every failure raised while parsing or executing an expression derives from
:class:`ScateError` and carries a ``category`` string.  The categories are
stable: they are written into normalized records and filter reports.
"""


class ScateError(Exception):
    category = "error"

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message


class ParseError(ScateError):
    """Raised for text that is not a well-formed expression."""

    category = "syntax"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class LexicalError(ParseError):
    category = "lexical"


class ExprSyntaxError(ParseError):
    category = "syntax"


class UnknownConstructorError(ScateError):
    category = "unknown-constructor"


class ArityError(ScateError):
    category = "arity-mismatch"


class InvalidArgumentError(ScateError, ValueError):
    category = "invalid-argument-value"


class InvalidDateError(InvalidArgumentError):
    pass


class OrderingError(InvalidArgumentError):
    pass


class PreconditionError(ScateError):
    category = "operator-precondition"


class AmbiguityError(PreconditionError):
    pass


class EmptyIntersectionError(ScateError):
    category = "empty-intersection"


class OutOfRangeError(ScateError):
    category = "out-of-range"


class UnanchorableError(ScateError):
    category = "unanchorable"


#: categories that count as "runtime errors" when filtering generated code
RUNTIME_CATEGORIES = (
    LexicalError.category,
    ExprSyntaxError.category,
    UnknownConstructorError.category,
    ArityError.category,
    InvalidArgumentError.category,
    PreconditionError.category,
    EmptyIntersectionError.category,
    OutOfRangeError.category,
    UnanchorableError.category,
)


class SchemaError(ValueError):
    """A record file line does not follow the record schema."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class AlignmentError(ValueError):
    pass


class UnparseableOutputError(ValueError):
    pass


class MissingPlaceholderError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


class ProviderError(RuntimeError):
    pass
