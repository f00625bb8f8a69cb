"""Exception hierarchy shared by every module."""


class SuperintError(Exception):
    """Base class for all package errors."""


class DomainError(SuperintError, ValueError):
    """A point lies on (or too close to) a field's singular set."""


class DimensionError(SuperintError, ValueError):
    """Arity mismatch between a point and a field or map."""


class ParameterError(SuperintError, ValueError):
    """Invalid model or map parameters."""


class SamplingError(SuperintError, RuntimeError):
    """The rejection sampler could not fill the requested point set."""


class StepSizeError(SuperintError, RuntimeError):
    """An integrator step size collapsed or a step landed on a singularity."""
