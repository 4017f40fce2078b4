"""
Exception hierarchy shared by every package of the toolkit.

Library code raises these; only the command layer turns them into exit codes.
"""


class CylpackError(Exception):
    """Base class for all toolkit errors"""


class DegenerateAxis(CylpackError, ValueError):
    """Axis too short to define a direction, or a point that is not on it"""


class PreconditionError(CylpackError, ValueError):
    """An operation was called outside its documented domain"""


class NonFinite(CylpackError, ValueError):
    """A callback or input produced NaN or infinity"""


class ContainerTooSmall(CylpackError):
    """The container ball cannot hold a single cylinder of the requested length"""


class AngleExceedsAlpha0(CylpackError):
    """A rearrangement sector is wider than the maximal equidistant angle"""

    def __init__(self, beta: float, alpha0: float):
        super().__init__(f"sector of {beta:.12f} rad exceeds alpha0 = {alpha0:.12f} rad")
        self.beta = beta
        self.alpha0 = alpha0


class DomainError(CylpackError, ValueError):
    """Argument outside the domain of a closed-form formula"""


class PackingFormatError(CylpackError, ValueError):
    """Malformed or unsupported packing file"""


class VerificationFailure(CylpackError):
    """A numerical contract did not hold"""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class ConfigError(CylpackError, ValueError):
    """Invalid configuration value (tolerance, seed, flag)"""
