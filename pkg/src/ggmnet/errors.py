"""Exception hierarchy shared across the pipeline stages."""


class GgmnetError(Exception):
    """Base class for all ggmnet errors."""


class ValidationError(GgmnetError):
    """Bad input data or configuration, detected before any numerics run."""


class NumericalError(GgmnetError):
    """A numerical stage failed (non-SPD matrix, degenerate data, ...)."""
