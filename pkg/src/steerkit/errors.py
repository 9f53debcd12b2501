"""Exception types shared across the package.

Input-shaped problems (bad matrices, out-of-range parameters, malformed
settings) derive from ValueError so callers can treat them uniformly;
property failures discovered at runtime (bound violations, failed
campaigns) derive only from SteerkitError.
"""


class SteerkitError(Exception):
    """Base class for every error raised by steerkit."""


class StateValidationError(SteerkitError, ValueError):
    """A raw matrix failed one of the density-matrix invariants."""


class NotHermitian(StateValidationError):
    """Hermiticity gap max|M - M^dag| exceeds the physicality tolerance."""


class TraceNotOne(StateValidationError):
    """|Tr(M) - 1| exceeds the physicality tolerance."""


class NotPositive(StateValidationError):
    """Minimum eigenvalue lies below the physicality tolerance."""


class NotXState(SteerkitError, ValueError):
    """An entry outside the X pattern exceeds the caller's tolerance."""


class Unphysical(SteerkitError, ValueError):
    """Canonical X-state parameters do not describe a physical state."""


class DomainError(SteerkitError, ValueError):
    """A scalar parameter lies outside its documented domain."""


class SettingConstraintViolated(SteerkitError, ValueError):
    """Measurement directions break a unit-norm or orthogonality constraint."""


class InvalidFunctionalForScenario(SteerkitError, ValueError):
    """Unknown functional name, or one incompatible with the scenario."""


class ExhaustedRejection(SteerkitError, RuntimeError):
    """A bounded rejection-sampling loop ran out of attempts."""


class SpectrumNotReal(SteerkitError, ArithmeticError):
    """An eigenvalue that must be real non-negative came out otherwise."""


class TightnessViolation(SteerkitError):
    """A numerically found maximum exceeded its closed-form bound."""


class CampaignFailed(SteerkitError):
    """A Monte Carlo campaign hit a counterexample; message carries it."""
