"""Exception hierarchy shared by all ccorbits modules."""


class ToolkitError(Exception):
    """Base class for all toolkit-specific errors."""


class PreconditionError(ToolkitError):
    """An operation was called outside its documented domain."""


class NonFiniteInput(PreconditionError):
    pass


class CollisionSingularity(PreconditionError):
    """Unregularized Hamiltonian evaluated at a primary's position."""


class BirkhoffSingularity(PreconditionError):
    """Regularized coordinates hit z = 0 or a pole of the momentum map."""


class ChartSingularity(PreconditionError):
    """A chart or trivialization degenerates at the requested point."""


class NonUnitQuaternion(PreconditionError):
    pass


class InvalidWindow(PreconditionError):
    pass


class UnsupportedChord(PreconditionError):
    pass


class DomainError(PreconditionError):
    """Parameter outside the validity region of a closed-form expression."""


class NotFree(PreconditionError):
    """Involution has a fixed generator."""


class NotEquivariant(PreconditionError):
    """Involution does not commute with the boundary operator."""


class BoundaryInconsistency(ToolkitError):
    """A constructed boundary operator fails to square to zero."""


class ConvergenceFailure(ToolkitError):
    """An iterative solver exhausted its budget without converging."""


class NoConvergence(ConvergenceFailure):
    """Shooting or continuation corrector failed to converge."""


class FoldDetected(ConvergenceFailure):
    """Continuation hit a fold (near-singular shooting Jacobian)."""

    def __init__(self, message, branch=None):
        super().__init__(message)
        self.branch = branch


class SamplingFailure(ToolkitError):
    """A sampling plan produced no usable points."""


class IntegrationError(ToolkitError):
    pass


class SingularityApproach(IntegrationError):
    """Trajectory approached z = 0, where the regularization chart ends."""


class DriftExceeded(IntegrationError):
    """Energy drift along a trajectory exceeded the requested tolerance."""


class StepFailure(IntegrationError):
    """The underlying integrator reported failure."""


class DegenerateCrossing(ToolkitError):
    """Crossing form has an eigenvalue below the regularity tolerance."""


class IrregularPath(ToolkitError):
    """Matrix path violates symplecticity beyond tolerance."""
