"""Exception types raised across the package.

Every exception carries a stable ``code`` string (its class name) so that
callers, in particular the command line tools, can map failures to
machine-readable error reports without parsing messages.
"""


class PropersplitError(Exception):
    """Base class for all package-specific failures."""

    @property
    def code(self) -> str:
        return type(self).__name__


class ParseError(PropersplitError):
    """Input file or manifest could not be parsed."""


class PreconditionError(PropersplitError):
    """An operation was called on inputs outside its domain."""


class NumericalFailure(PropersplitError):
    """A backend factorization failed to converge."""


class NonSquare(PreconditionError):
    """Operation requires a square matrix."""


class ShapeMismatch(PreconditionError):
    """Operand shapes are incompatible."""


class NotHermitian(PreconditionError):
    """Operation requires a Hermitian matrix."""


class NotPSD(PreconditionError):
    """Operation requires a positive semidefinite matrix."""


class NotGroupInvertible(PreconditionError):
    """The matrix has no group inverse, or it is numerically unsafe."""


class NotComplements(PreconditionError):
    """The two subspaces do not form a direct sum of the ambient space."""


class Unsolvable(PreconditionError):
    """The right-hand side is not in the range of the coefficient matrix."""


class NotProper(PreconditionError):
    """The candidate pair is not a proper splitting."""


class NotInPLh(PreconditionError):
    """The matrix does not factor as projection times Hermitian."""


class NotUnitary(PreconditionError):
    """Operation requires a unitary factor."""


class NotInvertible(PreconditionError):
    """Operation requires an invertible factor."""


class SingularIteration(PreconditionError):
    """I minus the iteration matrix is numerically singular."""


class CriterionFailed(PreconditionError):
    """The norm criterion that guarantees convergence does not hold."""


class IterationFailure(PropersplitError):
    """Base class for iterative-process failures.

    Instances carry the last iterate and the iteration report so callers
    can inspect how the run ended.
    """

    def __init__(self, message, x=None, report=None):
        super().__init__(message)
        self.x = x
        self.report = report


class Diverged(IterationFailure):
    """The iteration blew up or the residual failed to shrink."""


class Stalled(IterationFailure):
    """The iteration budget ran out while the residual was still shrinking."""
