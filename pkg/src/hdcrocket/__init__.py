"""MiniROCKET time series classification with optional HDC timestamp binding."""

from .datasets import (
    SyntheticConfig,
    TimeSeriesDataset,
    generate_synthetic,
    load_ucr_tsv,
    select_challenging_subset,
    stratified_folds,
    train_test_split,
)
from .encoding import build_time_encoding, make_phases, transform, transform_batch
from .persistence import load_model, save_model
from .pipeline import (
    PipelineModel,
    evaluate,
    fit_pipeline,
    oracle_eval,
    predict_labels,
    select_scale,
)
from .plan import TransformPlan, fit_plan, plan_dilations

__version__ = "0.1.0"

__all__ = [
    "SyntheticConfig",
    "TimeSeriesDataset",
    "generate_synthetic",
    "load_ucr_tsv",
    "select_challenging_subset",
    "stratified_folds",
    "train_test_split",
    "build_time_encoding",
    "make_phases",
    "transform",
    "transform_batch",
    "load_model",
    "save_model",
    "PipelineModel",
    "evaluate",
    "fit_pipeline",
    "oracle_eval",
    "predict_labels",
    "select_scale",
    "TransformPlan",
    "fit_plan",
    "plan_dilations",
]
