"""Text model: feature hashing, linear multi-head model, and backends."""

from .features import DIM, extract_features, fnv1a_64, tokenize
from .linear import (
    LinearSpellModel,
    ModelFormatError,
    TrainingDivergedError,
    TrainingMeta,
    evaluate,
    load_model,
    predict_raw,
    save_model,
    train,
)
from .backend import (
    BackendError,
    BackendHandle,
    BuiltinBackend,
    ExternalBackend,
    PredictionValidationError,
    predict,
    spawn_external_backend,
)

__all__ = [
    "DIM",
    "extract_features",
    "fnv1a_64",
    "tokenize",
    "LinearSpellModel",
    "TrainingMeta",
    "TrainingDivergedError",
    "ModelFormatError",
    "train",
    "evaluate",
    "predict_raw",
    "save_model",
    "load_model",
    "BackendError",
    "PredictionValidationError",
    "BackendHandle",
    "BuiltinBackend",
    "ExternalBackend",
    "predict",
    "spawn_external_backend",
]
