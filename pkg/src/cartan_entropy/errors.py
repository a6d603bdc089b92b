"""Exception hierarchy shared across the toolkit.

Every error raised on bad input or a failed internal cross-check derives
from ToolkitError so the CLI can map them to exit codes uniformly.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(ToolkitError):
    """Input outside an operation's domain (CLI exit code 2)."""


class VerificationError(ToolkitError):
    """An internal cross-check failed (CLI exit code 1)."""


# --- polynomial / number field ---

class NotSquarefree(InvalidInput):
    pass


class NotTotallyReal(InvalidInput):
    pass


class DegreeTooLarge(InvalidInput):
    pass


class EmptyResult(ToolkitError):
    """A search returned nothing; usually the bound was too small."""


class RankDeficient(ToolkitError):
    """Unit logs span less than n-1 dimensions; bound too small."""


class InconsistentDeterminants(VerificationError):
    """The n row-deleted regulator minors disagree."""


# --- actions ---

class NonIntegerEntry(VerificationError):
    """A matrix that must be integral has a non-integer entry."""


class DeterminantNotUnit(InvalidInput):
    pass


class NotCommuting(InvalidInput):
    pass


class ReducibleCharPoly(InvalidInput):
    pass


class NotUnimodular(InvalidInput):
    pass


class ZeroEigenvalue(VerificationError):
    """Guards against impossible zero eigenvalues of unimodular matrices."""


class DegenerateArrangement(InvalidInput):
    """Two Lyapunov functionals are proportional within tolerance."""


class CaseOError(InvalidInput):
    """Operation requires a rank n-1 Lyapunov matrix (entropy is a norm)."""


# --- geometry ---

class SpanDeficient(InvalidInput):
    pass


class Unbounded(InvalidInput):
    pass


class DimensionTooLarge(InvalidInput):
    pass


class DegenerateFacet(VerificationError):
    pass


# --- slow entropy ---

class NotANorm(InvalidInput):
    pass


class BoundViolation(VerificationError):
    """Optimizer output escaped a proven enclosing interval."""


class IdentityViolation(VerificationError):
    """An algebraic identity between two computed routes failed."""


class RatioOutOfRange(InvalidInput):
    pass


# --- analytic bounds ---

class NonPositiveArgument(InvalidInput):
    pass


class QuadratureNotConverged(ToolkitError):
    pass
