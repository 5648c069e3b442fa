"""Linear-chain CRF over the 3-tag space: features, training, decoding."""

from .features import FeatureTemplate, default_template, extract_features
from .model import CrfModel, correct, load_model, predict, save_model
from .objective import (
    CompiledSample,
    CrfObjective,
    compile_dataset,
    compile_sample,
    regularized_objective,
)
from .train import IterationInfo, TrainConfig, log_likelihood_and_gradient, train

__all__ = [
    "CrfModel",
    "CrfObjective",
    "CompiledSample",
    "FeatureTemplate",
    "IterationInfo",
    "TrainConfig",
    "compile_dataset",
    "compile_sample",
    "correct",
    "default_template",
    "extract_features",
    "load_model",
    "log_likelihood_and_gradient",
    "predict",
    "regularized_objective",
    "save_model",
    "train",
]
