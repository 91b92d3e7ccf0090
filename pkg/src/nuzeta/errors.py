"""Exception types shared across the package."""


class NuzetaError(Exception):
    """Base class for all errors raised by this package."""


class PoleAtOne(NuzetaError):
    """Evaluation requested at s = 1, where the function has a pole."""


class RangeExceeded(NuzetaError):
    """Requested point lies outside the supported |Im(s)| range."""


class PoleAtNonpositiveInteger(NuzetaError):
    """Gamma-family function requested at a nonpositive integer pole."""


class BranchTrackingFailure(NuzetaError):
    """Consecutive path points changed argument too fast to track the branch."""


class FormulaMismatch(NuzetaError):
    """The two closed forms for a coefficient disagreed (implementation bug)."""

    def __init__(self, n, v1, v2):
        self.n = n
        super().__init__(f"a({n}) mismatch: divisor form {v1!r} vs convolution form {v2!r}")


class OutOfRange(NuzetaError):
    """Index or argument exceeds the built table / allowed interval."""


class DivergentIntegral(NuzetaError):
    """Tail integral requested with an exponent that makes it diverge."""


class CertificateFailed(NuzetaError):
    """A zero-free-region inequality failed at some sigma."""


class ConstantViolated(NuzetaError):
    """One of the audited numeric constants does not hold."""


class BoundaryTooClose(NuzetaError):
    """A zero sits too close to a contour after all perturbation attempts."""


class SamplingNotConverged(NuzetaError):
    """Adaptive boundary sampling hit its refinement cap."""


class MaxDepthExceeded(NuzetaError):
    """Subdivision could not isolate a simple zero (cluster or multiple zero)."""

    def __init__(self, rect, winding):
        self.rect = rect
        self.winding = winding
        super().__init__(f"unresolved box {rect} with winding {winding}")


class BudgetExceeded(NuzetaError):
    """Requested raster exceeds the pixel budget."""


class StepTooCoarse(NuzetaError):
    """Grid stencil disagrees with direct evaluation beyond tolerance."""


class OutsideRegime(NuzetaError):
    """Asymptotic approximation requested where neither regime applies."""


class SingularSystem(NuzetaError):
    """Stencil moment system was singular (cannot happen for distinct offsets)."""
