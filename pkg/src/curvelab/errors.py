"""Exception hierarchy shared across the library.

Every error carries enough context to reproduce the failing call; certified
routines never return a possibly-wrong value, they raise instead.
"""


class CurveLabError(Exception):
    """Base class for all library errors."""


class ZeroPolynomial(CurveLabError):
    """An operation that requires a nonzero polynomial received zero."""


class EndpointRoot(CurveLabError):
    """A counting window endpoint is a root; the caller owns perturbation."""


class ZeroBase(CurveLabError):
    """Evaluation of negative exponents at zero."""


class ConstantInput(CurveLabError):
    """A curve-valued operation received a constant polynomial."""


class CommonFactor(CurveLabError):
    """Two polynomials share a nonconstant factor where they must not."""


class DegreeZeroInVar(CurveLabError):
    """Resultant elimination in a variable the polynomial does not contain."""


class ZeroDirection(CurveLabError):
    """A line restriction was asked for with direction (0, 0)."""


class NonGenericSweep(CurveLabError):
    """Sweep genericity failed (shared critical abscissa, vertical flex, ...)."""


class Singular(CurveLabError):
    """The curve has a real singular point (witness box attached when known)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class KleinViolation(CurveLabError):
    """Internal-error sentinel: a certified inflection count exceeded the bound."""


class NegativeSlack(CurveLabError):
    """Inflection budget went negative; certification bug upstream."""


class NonCompact(CurveLabError):
    """The curve has real branches escaping to infinity."""


class UnresolvedCandidate(CurveLabError):
    """A hull candidate stayed undecided after the refinement budget."""


class InfeasibleSelection(CurveLabError):
    """Line-family search exhausted its budget; message names the constraint."""


class SearchExhausted(CurveLabError):
    """Epsilon search ran out of candidates; per-candidate log attached."""

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log or []


class NonExactDivision(CurveLabError):
    """A division that must be exact left a remainder (internal error)."""


class ZeroAlexander(CurveLabError):
    """Burau determinant vanished identically."""


class InvalidN(CurveLabError):
    """Braid family parameter out of range."""


class BudgetExhausted(CurveLabError):
    """A certified refinement loop hit its budget without a verdict."""
