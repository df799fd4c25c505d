"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameter, flag, or configuration value (CLI exit code 2)."""


class NumericalInvariantError(RuntimeError):
    """A runtime numerical invariant was violated (CLI exit code 3)."""


class StabilityError(NumericalInvariantError):
    """Fixed-step integration would be unstable at the requested step size."""


class DegenerateSteadyStateError(NumericalInvariantError):
    """The generator's kernel is not one-dimensional; no unique steady state."""
