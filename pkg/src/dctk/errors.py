"""Exception hierarchy shared by all dctk modules."""


class DctkError(Exception):
    """Base class for all library errors."""


class IndeterminateSum(DctkError, ArithmeticError):
    """Raised when +inf and -inf are added."""


class IndeterminateDifference(DctkError, ArithmeticError):
    """Raised when a slope would be inf - inf."""


class DomainError(DctkError, ValueError):
    """Point lies outside the effective domain of a function."""


class UnsupportedForm(DctkError):
    """No closed-form conjugate applies to this function shape."""


class DegenerateSystem(DctkError):
    """Basic-solution enumeration cannot certify an LP optimum."""


class NotPrimalFeasible(DctkError):
    """Claimed primal point violates the linear system."""


class NotSignFeasible(DctkError):
    """Dual vector is negative on an inequality row."""


class CriteriaViolated(DctkError):
    """An optimality criterion fails; args identify the offender."""


class Unbounded(DctkError):
    """Objective unbounded from below."""


class Infeasible(DctkError):
    """No feasible point exists."""


class InfiniteSlope(DctkError):
    """Every candidate slope in a dual certificate is infinite."""


class EmptyIntersection(DctkError):
    """Intersection of the two base polyhedra has no integer point."""


class NotFeasible(DctkError):
    """A supplied witness is not feasible for the instance."""


class ValueMismatch(DctkError):
    """Primal and dual certificate values disagree; args carry the gap."""


class NoFeasibleWeight(DctkError):
    """No admissible weight vector exists inside the search window."""
