"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(ValueError):
    """Array dimensions are inconsistent with each other."""


class InfeasibleSeparationError(RuntimeError):
    """Rejection sampling could not meet the requested separation floor."""


class InfeasibleBoundError(DomainError):
    """The sample count is too small for the separation-based bound to apply."""


class DegenerateSceneError(RuntimeError):
    """The weighted Vandermonde system is numerically rank deficient."""


class UnsupportedConfigurationError(ValueError):
    """A configuration outside the supported model (e.g. unequal subspace sizes)."""


class RankDeficiencyError(RuntimeError):
    """Requested model order exceeds the numerical rank of the data."""


class EstimationError(RuntimeError):
    """Spectral estimation could not locate enough peaks."""


class ConfigError(ValueError):
    """Invalid or unknown experiment configuration entry."""
