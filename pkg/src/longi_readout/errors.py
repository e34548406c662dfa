"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """Evaluation time outside the waveform support [0, t_f]."""


class ResolutionError(ValueError):
    """Sampled waveform has too few points for the requested derivative."""


class GridError(ValueError):
    """Time grid is empty, non-monotone, or outside the supported range."""


class TruncationError(RuntimeError):
    """Fock-space truncation too small for the evolved state."""

    def __init__(self, message: str, suggested_truncation: int | None = None):
        super().__init__(message)
        self.suggested_truncation = suggested_truncation


class SingularCoefficientError(ValueError):
    """Floquet drive amplitude requested at a Bessel-function zero."""


class FitError(ValueError):
    """Scaling-exponent fit window is invalid or contains nonpositive data."""


class AlignmentError(ValueError):
    """Comparison inputs do not share a common time grid."""


class ConfigError(ValueError):
    """Experiment configuration failed schema validation."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class InfeasibleError(RuntimeError):
    """Search terminated without a constraint-satisfying candidate."""
