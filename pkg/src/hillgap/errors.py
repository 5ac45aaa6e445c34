"""Exception types shared across the package."""


class HillgapError(Exception):
    """Base class for all computational errors raised by this package."""


class NonRealPotential(HillgapError):
    """Operator construction requires a real-valued (conjugate-symmetric) potential."""


class TruncationTooSmall(HillgapError):
    """Truncation radius smaller than the potential's degree bound."""


class ConvergenceFailure(HillgapError):
    """An iterative computation failed to reach its tolerance."""


class HypothesisNotMet(HillgapError):
    """A check was invoked outside the hypothesis under which it is meaningful."""


class ValidityRegion(HillgapError):
    """Input outside the region where the series representation is justified."""


class TailNotConverged(HillgapError):
    """Series truncated while the last order still exceeds the tail tolerance."""


class NoContraction(HillgapError):
    """Fixed-point iteration exceeded its iteration budget."""


class ImaginaryResidue(HillgapError):
    """The diagonal series value developed an imaginary part beyond tolerance."""


class BoundViolated(HillgapError):
    """A two-sided analytic bound failed beyond numerical tolerance."""


class RangeError(HillgapError):
    """Argument outside the admissible integer range."""


class ComplexLeak(HillgapError):
    """A spectrum expected to be real contains eigenvalues with large imaginary part."""


class LocalizationViolation(UserWarning):
    """Eigenvalue localization bound failed; reported as a warning flag, never raised."""
