"""Exception types shared across the package.

The CLI maps these onto exit codes: state-file problems are parse errors
(exit 3), everything else here is a domain error (exit 4).
"""


class GaussifyError(Exception):
    """Base class for all package errors."""


class StateFormatError(GaussifyError):
    """A state file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateStateError(GaussifyError):
    """Zero-norm (or zero-trace) state where a normalized result is required."""


class InvalidDensityError(GaussifyError):
    """Operator fails the density-matrix requirements beyond tolerance."""


class DegenerateProtocolError(GaussifyError):
    """Schmidt iteration started from a vanishing leading coefficient."""


class NoGaussianLimitError(GaussifyError):
    """No Gaussian limit exists (vanishing vacuum amplitude)."""


class NotNormalizableError(GaussifyError):
    """Requested limit state is not normalizable; carries the spectral norm."""

    def __init__(self, norm):
        self.norm = float(norm)
        super().__init__(f"not normalizable: spectral norm {self.norm:.12g} >= 1")


class NonConvergenceError(GaussifyError):
    """Iteration norms grew past the divergence threshold."""

    def __init__(self, step, norm_sq):
        self.step = step
        self.norm_sq = float(norm_sq)
        super().__init__(
            f"iteration diverged at step {step}: squared norm {self.norm_sq:.6g} "
            "exceeds the divergence threshold"
        )


class NoClickSupportError(GaussifyError):
    """Click conditioning has (numerically) no support on the given input."""
