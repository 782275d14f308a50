"""Exception taxonomy shared by all modules."""


class AttractorlabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AttractorlabError):
    """Input outside a function's mathematical domain (e.g. |z| > 1)."""


class PrecisionError(AttractorlabError):
    """Requested tolerance unattainable at the working precision, or a
    non-finite value appeared where a finite one was promised."""


class ResourceError(AttractorlabError):
    """Requested computation exceeds a configured size budget."""


class UnsupportedFamily(AttractorlabError):
    """Operation not defined for this exponent-sequence family."""


class GcdError(AttractorlabError):
    """Index pair (h, k) violates gcd(h, k) = 1."""


class SingularError(AttractorlabError):
    """Level-set slope field is singular (denominator below tolerance)."""


class BranchError(AttractorlabError):
    """Evaluation requested inside a guard band around a branch ray."""


class NoSignChange(AttractorlabError):
    """Bisection bracket does not straddle a sign change."""


class StepFailure(AttractorlabError):
    """Adaptive step control underflowed the minimum step size."""


class ConvergenceError(AttractorlabError):
    """Iteration failed to converge within the allowed escalations."""


class EmptySelection(AttractorlabError):
    """A filter left no points to aggregate."""
