"""Exception hierarchy shared across the package."""


class VimaxError(Exception):
    """Base class for all library errors."""


class ParseError(VimaxError, ValueError):
    """Malformed instance, solution or CNF text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataIntegrityError(VimaxError):
    """Input data is well-formed but violates a required invariant."""


class SizeLimitError(VimaxError):
    """A search space or model exceeds its configured cap."""


class UnsupportedStructureError(VimaxError):
    """The operation needs a structural property the graph lacks."""


class ValidationError(VimaxError):
    """An imported solver solution is inconsistent with the instance."""
