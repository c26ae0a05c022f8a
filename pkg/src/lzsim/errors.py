"""Exception types shared across the package.

Every failure mode maps to one of these classes so the CLI can translate
exceptions into stable exit codes (config -> 2, solver -> 3, fit -> 4).
"""


class LzsimError(Exception):
    """Base class for all package errors."""


class ValidationError(LzsimError, ValueError):
    """A parameter violates a documented precondition or type invariant."""


class ParseError(LzsimError, ValueError):
    """A config file or CSV input is malformed."""


class NonPositiveFrequency(LzsimError):
    """The flux-to-frequency map left its valid range (frequency <= 0)."""


class MissingDriveFrequency(LzsimError):
    """A lab-frame operation needs an absolute drive frequency."""


class StepSizeUnderflow(LzsimError):
    """The adaptive integrator could not make progress (stiffness guard)."""


class InvariantViolation(LzsimError):
    """The integrated Bloch vector left the unit ball beyond tolerance."""


class ExcessiveStepCount(LzsimError):
    """The projected or actual number of integration steps is unreasonable."""


class NotConverged(LzsimError):
    """A steady-state average did not settle within the convergence window."""


class DetuningExceedsAmplitude(LzsimError, ValueError):
    """|detuning| >= modulation amplitude: the sweep velocity is not real."""


class OutOfValidityRange(LzsimError, ValueError):
    """Argument outside the range the special-function routine supports."""


class OutOfDomain(LzsimError, ValueError):
    """Argument outside the mathematical domain of the function."""


class FitDiverged(LzsimError):
    """A nonlinear fit failed to converge or left an unacceptable residual."""


class InsufficientData(LzsimError, ValueError):
    """Too few data points, or too little span, to attempt the fit."""


class InsufficientCurves(LzsimError, ValueError):
    """The amplitude calibration needs curves at >= 2 distinct frequencies."""


class NoMinimumFound(LzsimError):
    """A calibration curve has no usable interior population minimum."""


class DegenerateAbscissa(LzsimError, ValueError):
    """A linear fit was given fewer than two distinct x values."""


class AsymmetricGrid(LzsimError, ValueError):
    """A detuning grid is not mirror-symmetric about zero."""
