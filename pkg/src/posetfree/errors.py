"""Exception hierarchy shared by all modules."""


class PosetFreeError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(PosetFreeError, ValueError):
    """Malformed input object (cyclic relation, bits outside the ground set, ...)."""


class FormatError(ValidationError):
    """A text file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(PosetFreeError, ValueError):
    """An operation was called outside its documented domain."""


class ThresholdNotMet(PreconditionError):
    """The Lubell mass of the input does not exceed the extractor's threshold."""


class CapacityError(PosetFreeError):
    """Input is larger than a configured cap (ground size, DP table, search budget)."""


class ProofStepFailure(PosetFreeError, RuntimeError):
    """A constructive step that should always succeed did not.

    When the preconditions of an extractor hold this indicates either an
    implementation defect or a gap in the argument being executed; the message
    names the step.
    """
