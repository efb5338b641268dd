"""Exception hierarchy shared across the laboratory."""


class NlsLabError(Exception):
    """Base class for all laboratory errors."""


class ConfigError(NlsLabError):
    """Malformed or inconsistent scenario configuration."""


class FrequencyResonant(NlsLabError):
    """An integer combination of the frequencies is numerically zero."""


class NotStabilized(NlsLabError):
    """Index-set enumeration did not stabilize within the radius cap."""


class GridTooCoarse(NlsLabError):
    """Potential varies too rapidly for the grid spacing."""


class DegenerateSpectrum(NlsLabError):
    """Two bound-state eigenvalues closer than the simplicity tolerance."""


class NoBoundStates(NlsLabError):
    """Operator has no eigenvalue below the continuum edge tolerance."""


class NearSpectrum(NlsLabError):
    """Resolvent requested at a point too close to the spectrum."""


class NoConvergence(NlsLabError):
    """Iterative solver exhausted its iteration budget."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NotInContinuum(NlsLabError):
    """Limiting absorption requested outside the continuous spectrum."""


class ExtrapolationUnstable(NlsLabError):
    """Successive epsilon-extrapolants disagree beyond tolerance."""


class AmplitudeTooLarge(NlsLabError):
    """Mode amplitude outside the validity ball of the profile map."""


class MissingDependency(NlsLabError):
    """Internal recursion-order violation (bug guard)."""


class NewtonDiverged(NlsLabError):
    """Modulation Newton iteration failed to converge."""


class JacobianSingular(NlsLabError):
    """Modulation Jacobian numerically singular away from the fallback regime."""


class NonFinite(NlsLabError):
    """A simulation state contains NaN or Inf values."""


class StepUnstable(NlsLabError):
    """Reduced-model trajectory escaped its validity ball."""


class FgrDegenerate(NlsLabError):
    """A Fermi-golden-rule coefficient is numerically zero."""
