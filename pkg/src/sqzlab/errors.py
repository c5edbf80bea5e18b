"""Exception types shared across the toolkit.

Domain errors on plain bad arguments (negative lengths, empty ranges and so
on) raise the builtin ValueError.  The classes here mark failures that carry
physical meaning, so callers can tell "you fed me garbage" apart from "the
model has no answer here".
"""


class SqzlabError(Exception):
    """Base class for model and solver failures."""


class ConfigError(SqzlabError):
    """A configuration file is malformed or violates a field invariant."""


class SolverError(SqzlabError):
    """A root find or fixed-point iteration failed to converge."""


class ModelValidityError(SqzlabError):
    """Inputs left the regime where the model's formulas hold (e.g. L >= 1)."""


class StabilityError(SqzlabError):
    """The cavity geometry supports no self-consistent Gaussian mode."""


class AboveThresholdError(SqzlabError):
    """Pump at or above oscillation threshold; below-threshold formulas only."""


class NoGainError(SqzlabError):
    """Measured gain is at or below unity, so no threshold can be inferred."""
