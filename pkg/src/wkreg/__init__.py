"""Kernel ridge regression with chaos-expanded noise models.

Fits a classical GP posterior and a noise-aware ridge predictor over one
shared factorization, so the part of the predictive variance caused purely
by measurement noise can be separated from the full posterior variance.
Supports non-Gaussian (e.g. gamma) noise through exact two-term expansions
and propagates it by seeded Monte Carlo.
"""

from ._backend import BACKEND
from .errors import (
    ConfigError,
    ConfigInvalid,
    DegenerateSample,
    DimensionMismatch,
    NonPositiveRidge,
    NonPositiveStd,
    NotPositiveDefinite,
    RidgeNotNoiseVariance,
    WkregError,
    WrongKernelVariant,
)
from .experiments import (
    ExperimentConfig,
    GammaStudyResult,
    Lemma3Row,
    TubeTable,
    generate_dataset,
    run_gamma_study,
    run_lemma3_sweep,
    run_tube_experiment,
    true_map,
)
from .kernels import (
    Exponential,
    FiniteFeature,
    Kernel,
    Polynomial,
    SquaredExponential,
    feature_matrix,
    gram,
    kernel_from_config,
    kernel_to_config,
    kvec,
)
from .linalg import CholFactor, SymMatrix, cholesky, solve, solve_twice
from .montecarlo import (
    DensityEstimate,
    Histogram,
    RealizationSet,
    empirical_moments,
    histogram,
    kde,
    sample_at,
    sample_paths,
    silverman_bandwidth,
)
from .noise import (
    CustomTwoTerm,
    GammaNoise,
    GaussianNoise,
    NoiseModel,
    Pce2,
    moments_from_pce,
    noise_from_config,
    noise_to_config,
    sample_noise,
    sample_standardized,
    two_term_pce,
)
from .regression import (
    Dataset,
    FittedModel,
    GpPrediction,
    PcePrediction,
    fit,
    predict_from_weights,
    weight_space_solve,
    wk_moments,
)
from .streams import Stream

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CholFactor",
    "ConfigError",
    "ConfigInvalid",
    "CustomTwoTerm",
    "Dataset",
    "DegenerateSample",
    "DensityEstimate",
    "DimensionMismatch",
    "ExperimentConfig",
    "Exponential",
    "FiniteFeature",
    "FittedModel",
    "GammaNoise",
    "GammaStudyResult",
    "GaussianNoise",
    "GpPrediction",
    "Histogram",
    "Kernel",
    "Lemma3Row",
    "NoiseModel",
    "NonPositiveRidge",
    "NonPositiveStd",
    "NotPositiveDefinite",
    "Pce2",
    "PcePrediction",
    "Polynomial",
    "RealizationSet",
    "RidgeNotNoiseVariance",
    "SquaredExponential",
    "Stream",
    "SymMatrix",
    "TubeTable",
    "WkregError",
    "WrongKernelVariant",
    "cholesky",
    "empirical_moments",
    "feature_matrix",
    "fit",
    "generate_dataset",
    "gram",
    "histogram",
    "kde",
    "kernel_from_config",
    "kernel_to_config",
    "kvec",
    "moments_from_pce",
    "noise_from_config",
    "noise_to_config",
    "predict_from_weights",
    "run_gamma_study",
    "run_lemma3_sweep",
    "run_tube_experiment",
    "sample_at",
    "sample_noise",
    "sample_paths",
    "sample_standardized",
    "silverman_bandwidth",
    "solve",
    "solve_twice",
    "true_map",
    "two_term_pce",
    "weight_space_solve",
    "wk_moments",
]
