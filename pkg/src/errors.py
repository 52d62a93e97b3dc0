"""Exception hierarchy for acyclic-thinning.

Every error carries the process exit code the CLI reports for it, so the
command-line front end never has to guess a category from a message.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CERTIFICATION = 3
EXIT_INVARIANT = 4


class ThinningError(Exception):
    """Base class for all library errors."""

    exit_code: int = EXIT_INVARIANT


class MalformedCellError(ThinningError):
    """A cell has the wrong arity, repeated vertices, or duplicates another cell."""

    exit_code = EXIT_PARSE


class MeshParseError(ThinningError):
    """An input file could not be parsed."""

    exit_code = EXIT_PARSE

    def __init__(self, path: str, line: int | None, message: str):
        self.path = str(path)
        self.line = line
        self.message = message
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


class CorruptTableError(ThinningError):
    """A stored acyclicity table failed validation."""

    exit_code = EXIT_PARSE

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"corrupt table ({field}): {message}")


class KindMismatchError(ThinningError):
    """A table or configuration was used with a complex of another model kind."""


class TableRefusedError(ThinningError):
    """Eager generation was requested for a kind that needs an explicit opt-in."""

    exit_code = EXIT_USAGE


class SizeLimitError(ThinningError):
    """Input is larger than a verification path accepts."""

    exit_code = EXIT_USAGE


class AnchorError(ThinningError):
    """An anchor face is not on the original external boundary."""

    exit_code = EXIT_PARSE


class InvariantViolationError(ThinningError):
    """An internal invariant failed (boundary of boundary, closure, homology change)."""


class UnsupportedKindError(ThinningError):
    """An operation does not exist for the requested model kind."""

    exit_code = EXIT_USAGE
