class AlignmentError(Exception):
    """Base class for errors raised by the engine."""


class ValidationError(AlignmentError, ValueError):
    """Bad input: parameters out of range, mismatched blocks, malformed config."""


class ConvergenceError(AlignmentError, RuntimeError):
    """A numerical contract could not be met (truncation, norm drift, eigensolver)."""
