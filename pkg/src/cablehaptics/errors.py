"""Exception types shared across the package."""


class CableHapticsError(Exception):
    """Base class for all package-specific errors."""


class DegenerateGeometry(CableHapticsError):
    """End effector too close to an anchor for a cable direction to be meaningful."""


class ZeroVector(CableHapticsError):
    """A direction was requested from a vector with (near-)zero norm."""


class DegenerateInput(CableHapticsError):
    """Input data carries no usable signal for the requested estimate."""


class InvalidTension(CableHapticsError):
    """A commanded tension is negative or non-finite."""


class ConfigError(CableHapticsError):
    """A configuration file is missing, malformed, or violates the schema."""
