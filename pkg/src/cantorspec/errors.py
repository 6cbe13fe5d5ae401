"""Exception hierarchy shared across the package.

Numeric failures are split by what the caller can do about them: domain
errors are programming errors, budget/tolerance errors mean "retry with a
bigger budget or looser target", convergence errors signal ill-conditioned
input that may need rescaling.
"""


class CantorSpecError(Exception):
    """Base class for all package errors."""


class DomainError(CantorSpecError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole."""


class ApplicabilityError(CantorSpecError):
    """A method's structural precondition fails (e.g. integrality of
    alpha_0 - alpha_i); the caller should fall back to a direct method."""


class ConvergenceError(CantorSpecError):
    """An iteration exhausted its budget without meeting its tolerance."""


class ToleranceError(CantorSpecError):
    """An adaptive scheme cannot certify the requested tolerance within
    its work budget."""


class BudgetError(CantorSpecError):
    """A simulation exceeded its configured population/size cap."""


class MultiplicityError(CantorSpecError):
    """Residue-based formulas requested for a spectrum with (numerically)
    multiple roots, where residues were omitted."""
