"""Exception hierarchy.

Validation problems (bad arguments, violated preconditions) derive from
``ValidationError``; failures of a numerical procedure that was given valid
input derive from ``NumericalError``.  The CLI maps these to exit codes 1 and 2.
"""


class PtRosenError(Exception):
    """Base class for all package errors."""


class ValidationError(PtRosenError, ValueError):
    """Invalid argument or violated precondition."""


class DimensionMismatchError(ValidationError):
    pass


class DecayError(ValidationError):
    """Field is not small enough at the grid boundary for periodic spectral calculus."""


class PoleError(ValidationError):
    """A linear-spectrum level sits on the singularity a - n = 0."""


class SizeBudgetError(ValidationError):
    pass


class InsufficientDataError(ValidationError):
    """Trajectory lacks the snapshots or points a diagnostic needs."""


class NumericalError(PtRosenError, ArithmeticError):
    """A numerical procedure failed on valid input."""


class ConvergenceError(NumericalError):
    """Dense eigensolver did not converge."""


class GrowthWindowError(NumericalError):
    """No usable exponential-growth window in a trajectory."""
