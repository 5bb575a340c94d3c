"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class TwoPrimesError(Exception):
    exit_code = 1


class ValidationError(TwoPrimesError, ValueError):
    exit_code = 3


class ConfigurationError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class ResourceError(TwoPrimesError):
    """Raised when a computation would exceed its effort or memory budget."""

    exit_code = 4

    def __init__(self, message, limit=None, partial=None):
        super().__init__(message)
        self.limit = limit
        self.partial = partial


class NumericToleranceError(TwoPrimesError):
    exit_code = 5

    def __init__(self, message, achieved=None, estimate=None):
        super().__init__(message)
        self.achieved = achieved
        self.estimate = estimate


class PrecisionError(NumericToleranceError):
    """A certified decision (ceiling, comparison) failed at maximum precision."""

    def __init__(self, message, candidates=None):
        super().__init__(message)
        self.candidates = candidates
