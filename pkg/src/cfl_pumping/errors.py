class CflError(Exception):
    """Base class for every domain error raised by cfl_pumping."""


class GrammarFormatError(CflError):
    pass


class GrammarSyntaxError(GrammarFormatError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EmptyGrammarError(GrammarFormatError):
    pass


class UndeclaredStartError(GrammarFormatError):
    pass


class OracleBudgetExceeded(CflError):
    pass


class FormLengthCapExceeded(OracleBudgetExceeded):
    """A leftmost sentential form needs more nullable slack than max_len + K allows."""


class EmptyLanguageError(CflError):
    pass


class NoDuplicateError(CflError):
    pass


class CodePathMismatch(CflError):
    pass


class PathNotFoundError(CflError):
    pass


class InvalidCodeError(CflError):
    pass


class PumpPreconditionError(CflError):
    pass


class PreconditionViolated(CflError):
    pass


class PumpingConstantOverflow(CflError):
    pass


class InvariantViolation(CflError):
    """An internal postcondition failed; always a bug, never a valid outcome."""
