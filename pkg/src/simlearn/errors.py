"""Exception types shared across the package."""


class SimlearnError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(SimlearnError, ValueError):
    """A vector or matrix has an incompatible shape or length."""


class PrincipleViolationError(SimlearnError, ValueError):
    """A test-input matrix fails the offline excitation requirements."""


class ProtocolError(SimlearnError, RuntimeError):
    """A plant returned a response that does not fit the declared dimensions."""


class DegenerateBehaviorError(SimlearnError, RuntimeError):
    """The trajectory-difference matrix lost rank; the captured data cannot
    represent a behavior of full input dimension."""


class NotSimilarError(SimlearnError, RuntimeError):
    """An operation required a similarity certificate that is absent or
    negative."""


class InvalidExperienceError(SimlearnError, ValueError):
    """The supplied learned trajectory is not a member of the guest behavior."""


class IlcDivergenceError(SimlearnError, RuntimeError):
    """The iterative learner stopped making progress, which signals a mismatch
    between the data-derived response matrix and the actual plant."""

    def __init__(self, message, run=None):
        super().__init__(message)
        self.run = run


class ConfigError(SimlearnError, ValueError):
    """A scenario configuration could not be parsed or validated."""
