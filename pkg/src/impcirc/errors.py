"""Diagnostic exception hierarchy shared by every layer of the package."""


class ImpCircError(Exception):
    """Base class for every diagnostic this package raises on bad input."""


class GradingError(ImpCircError):
    """Ill-formed injection data or a grade-mismatched composition."""


class WiringError(ImpCircError):
    """Matrix shapes that do not line up, or entries outside [0, 1]."""


class TermError(ImpCircError):
    """Ill-formed graded terms, unknown generators, unparsable term text."""


class NotComparable(ImpCircError):
    """Equality was asked of two morphisms with different profiles."""


class EvalLimitError(ImpCircError):
    """Evaluation refused because a term exceeds the wire budget."""


class LangError(ImpCircError):
    """Base for surface-language diagnostics; carries a source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class ParseError(LangError):
    pass


class TypingError(LangError):
    pass
