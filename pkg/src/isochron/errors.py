"""Exception types raised by the library."""


class IsochronError(Exception):
    """Base class for all library errors."""


class GridSizeError(IsochronError, ValueError):
    """Grid size is too small or inconsistent between operands."""


class ScaleError(IsochronError, ValueError):
    """Nonpositive scaling factor."""


class RegularityError(IsochronError, ValueError):
    """Regularity diagnostic is undefined (e.g. constant input)."""


class SingularSystemError(IsochronError, ArithmeticError):
    """Order-zero matrix of a polynomial linear system is (nearly) singular.

    Carries the minimal |det A0(theta)| over the grid and the grid angle
    where it is attained.
    """

    def __init__(self, min_det, theta):
        self.min_det = float(min_det)
        self.theta = float(theta)
        super().__init__(
            f"singular order-zero system: min |det A0| = {self.min_det:.3e} "
            f"at theta = {self.theta:.6f}"
        )


class ObstructionError(IsochronError, ArithmeticError):
    """Obstruction coefficient of a cohomology equation is not negligible."""

    def __init__(self, value, mode):
        self.value = float(value)
        self.mode = mode
        super().__init__(
            f"nonzero obstruction |E_{mode}| = {self.value:.3e}: averages must be "
            "removed before solving"
        )


class ResonanceError(IsochronError, ArithmeticError):
    """A cohomology divisor away from the pinned mode is (nearly) zero."""

    def __init__(self, divisor, mode):
        self.divisor = complex(divisor)
        self.mode = mode
        super().__init__(
            f"resonant divisor {self.divisor:.3e} at (order, mode) = {mode}"
        )


class RangeViolationError(IsochronError, ValueError):
    """Radial component of a map leaves the domain of validity of K."""

    def __init__(self, bound):
        self.bound = float(bound)
        super().__init__(
            f"radial range bound {self.bound:.6f} exceeds the domain |s| <= 1 of K"
        )


class ContractViolationError(IsochronError, ValueError):
    """An argument violates a documented contract (e.g. nonzero order 0)."""


class IntegrationError(IsochronError, RuntimeError):
    """Adaptive ODE integration failed (step-size underflow or solver abort)."""


class SectionError(IsochronError, RuntimeError):
    """No transversal Poincare-section crossing was found."""


class ConvergenceError(IsochronError, RuntimeError):
    """An iteration exhausted max_iter without meeting its tolerance."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class DivergenceError(IsochronError, RuntimeError):
    """Residuals grew over several consecutive iterations.

    Usually means epsilon is too large or n_theta too small for the regime.
    """

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
