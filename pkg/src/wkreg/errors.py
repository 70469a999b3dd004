"""Exception and warning types shared across the package."""


class WkregError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(WkregError):
    """Operands have incompatible shapes or point dimensions."""


class NotPositiveDefinite(WkregError):
    """Factorization failed even after the escalating jitter policy."""


class WrongKernelVariant(WkregError):
    """Operation requires a kernel variant other than the one supplied."""


class NonPositiveStd(WkregError):
    """A standard deviation that must be strictly positive was not."""


class NonPositiveRidge(WkregError):
    """The ridge parameter must be strictly positive."""


class DegenerateSample(WkregError):
    """Sample set lacks the variation required by the estimator."""


class ConfigError(WkregError):
    """Invalid run or experiment configuration."""


# Name used by the experiments module for invalid configs.
ConfigInvalid = ConfigError


class RidgeNotNoiseVariance(UserWarning):
    """Noise-only variance was requested with ridge != noise variance.

    The decomposition is calibrated for ridge equal to the noise variance;
    other settings still compute, hence a warning rather than an error.
    """
