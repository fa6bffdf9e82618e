"""
Twistlab Errors

Exception hierarchy shared by the algebra engines and the CLI.
Library code raises these; the CLI turns them into failed checks.
"""


class TwistlabError(Exception):
    """Base class for all twistlab errors."""


class ScalarError(TwistlabError):
    """Raised when a coefficient operation is used outside its domain."""


class PresentationError(TwistlabError):
    """Raised for unknown generators or malformed presentation data."""


class TensorRankError(TwistlabError):
    """Raised when tensor elements of different rank are combined."""


class TruncationError(TwistlabError):
    """Raised when an exponential would need a genuinely infinite sum."""


class RepresentationError(TwistlabError):
    """Raised when no representation matrices satisfy the requirements."""


class RelationError(TwistlabError):
    """Raised for inconsistent relation systems or failed localizations."""


class BudgetExceeded(TwistlabError):
    """Raised when a reduction runs out of its rewrite budget."""

    def __init__(self, message, steps=None):
        super().__init__(message)
        self.steps = steps


class UsageError(TwistlabError):
    """Raised for unknown suites, selectors or malformed flags."""
