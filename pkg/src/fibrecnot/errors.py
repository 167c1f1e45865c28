"""Exception types shared across the toolkit.

Every error raised on bad physics input or malformed data derives from
ToolkitError so callers (CLI, service) can map them to exit codes and
HTTP statuses in one place.
"""


class ToolkitError(Exception):
    """Base class for all domain errors raised by this package."""


class LayoutError(ToolkitError):
    """Unknown mode label, duplicate label, or layout mismatch."""


class UnitarityError(ToolkitError):
    """A matrix that should be unitary is not, within tolerance."""


class NormalizationError(ToolkitError):
    """A state whose amplitudes should be normalized is not."""


class DegeneratePostSelectionError(ToolkitError):
    """Post-selection success probability is numerically zero."""


class DomainError(ToolkitError):
    """A parameter or request is outside its physically valid range."""


class ParseError(ToolkitError):
    """Malformed text input; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
