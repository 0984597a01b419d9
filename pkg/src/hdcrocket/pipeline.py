"""End-to-end fit / evaluate pipelines and scale selection."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .datasets import TimeSeriesDataset, stratified_folds
from .encoding import (
    PhaseVector,
    TimeEncodingTable,
    build_time_encoding,
    make_phases,
    transform_batch,
    transform_batch_scales,
)
from .errors import EmptyDataset, InputTooShort, LengthMismatch
from .plan import N_FEATURES, TransformPlan, fit_plan
from .ridge import (
    DEFAULT_ALPHAS,
    RidgeModel,
    Standardizer,
    predict,
    ridge_fit,
    standardize_apply,
    standardize_fit,
)

__all__ = [
    "DEFAULT_SCALES",
    "PipelineModel",
    "EvalResult",
    "ScaleSelection",
    "derive_seeds",
    "fit_pipeline",
    "predict_labels",
    "evaluate",
    "select_scale",
    "oracle_eval",
]

log = logging.getLogger(__name__)

DEFAULT_SCALES = (0, 1, 2, 3, 4, 5, 6)


def derive_seeds(seed) -> tuple[int, int]:
    """Independent (bias-fitting, phase) seeds from one master seed."""
    state = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint32)
    return int(state[0]), int(state[1])


@dataclass(frozen=True)
class PipelineModel:
    plan: TransformPlan
    phases: PhaseVector
    scale: float | None
    mode: str
    standardizer: Standardizer
    ridge: RidgeModel
    seed: int | None

    @property
    def input_length(self) -> int:
        return self.plan.input_length

    @property
    def classes(self) -> tuple[str, ...]:
        return self.ridge.classes

    @cached_property
    def encoding(self) -> TimeEncodingTable | None:
        if self.mode != "hdc":
            return None
        return build_time_encoding(self.plan.input_length, self.scale, self.phases)

    def descriptors(self, X) -> np.ndarray:
        return transform_batch(X, self.plan, self.encoding, self.mode)


def _check_train(train: TimeSeriesDataset):
    if len(train) == 0:
        raise EmptyDataset("training set is empty")
    if train.length < 9:
        raise InputTooShort(f"series length {train.length} is below 9")


def _fit_classifier(Y, labels, classes, alphas):
    st = standardize_fit(Y)
    return st, ridge_fit(standardize_apply(st, Y), labels, alphas, classes)


def fit_pipeline(train: TimeSeriesDataset, s: float = 1.0, seed=0, mode: str = "hdc",
                 alphas=DEFAULT_ALPHAS) -> PipelineModel:
    """Fit biases, encode, transform, standardise and train the ridge classifier."""
    _check_train(train)
    if mode not in ("ppv", "hdc"):
        raise ValueError(f"unknown mode {mode!r}")
    plan_seed, phase_seed = derive_seeds(seed)
    plan = fit_plan(train.series, plan_seed)
    phases = make_phases(N_FEATURES, phase_seed)
    scale = float(s) if mode == "hdc" else None
    enc = build_time_encoding(train.length, scale, phases) if mode == "hdc" else None
    Y = transform_batch(train.series, plan, enc, mode)
    st, ridge = _fit_classifier(Y, train.labels, train.class_names, alphas)
    model = PipelineModel(plan, phases, scale, mode, st, ridge, seed)
    if enc is not None:
        model.__dict__["encoding"] = enc
    return model


def _aligned_labels(classes, ds: TimeSeriesDataset) -> np.ndarray:
    """Map dataset labels onto model class indices; unknown classes become -1."""
    lookup = {c: i for i, c in enumerate(classes)}
    mapping = np.array([lookup.get(c, -1) for c in ds.class_names], dtype=np.int64)
    return mapping[ds.labels] if len(ds) else np.zeros(0, dtype=np.int64)


def predict_labels(model: PipelineModel, X):
    """Predicted class indices and scores for the series in ``X``."""
    X = getattr(X, "series", X)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.input_length:
        raise LengthMismatch(
            f"series length {X.shape[1]} does not match model length {model.input_length}"
        )
    return predict(model.ridge, model.standardizer, model.descriptors(X))


@dataclass
class EvalResult:
    accuracy: float
    confusion: np.ndarray
    recall: np.ndarray
    predictions: np.ndarray = field(repr=False)


def _score(pred, truth, n_classes) -> EvalResult:
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    known = truth >= 0
    np.add.at(confusion, (truth[known], pred[known]), 1)
    support = confusion.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        recall = np.where(support > 0, np.diag(confusion) / np.maximum(support, 1), np.nan)
    return EvalResult(float(np.mean(pred == truth)), confusion, recall, pred)


def evaluate(model: PipelineModel, test: TimeSeriesDataset) -> EvalResult:
    if len(test) == 0:
        raise EmptyDataset("test set is empty")
    pred, _ = predict_labels(model, test.series)
    truth = _aligned_labels(model.classes, test)
    return _score(pred, truth, len(model.classes))


@dataclass
class ScaleSelection:
    scale: float
    wins: dict
    fold_accuracies: np.ndarray  # (k, n_candidates)


def _accuracies_per_scale(train: TimeSeriesDataset, test: TimeSeriesDataset,
                          candidates, seed, alphas) -> np.ndarray:
    """Test accuracy of an HDC pipeline for each candidate scale.

    Bias fitting and thresholding are shared; each scale gets its own
    standardiser and ridge model, as separate ``fit_pipeline`` calls would.
    """
    plan_seed, phase_seed = derive_seeds(seed)
    plan = fit_plan(train.series, plan_seed)
    phases = make_phases(N_FEATURES, phase_seed)
    tables = [build_time_encoding(train.length, float(s), phases) for s in candidates]
    X = np.concatenate([train.series, test.series])
    Y = transform_batch_scales(X, plan, tables)
    n = len(train)
    truth = _aligned_labels(train.class_names, test)
    acc = np.empty(len(candidates))
    for q in range(len(candidates)):
        st, ridge = _fit_classifier(Y[q, :n], train.labels, train.class_names, alphas)
        pred, _ = predict(ridge, st, Y[q, n:])
        acc[q] = np.mean(pred == truth)
    return acc


def select_scale(train: TimeSeriesDataset, candidates=DEFAULT_SCALES, k: int = 10,
                 seed=0, alphas=DEFAULT_ALPHAS) -> ScaleSelection:
    """Pick the scale that wins the most cross-validation folds.

    Each fold's winner is its most accurate scale; ties in either step go to
    the smaller scale.
    """
    _check_train(train)
    candidates = sorted(float(s) for s in candidates)
    folds = stratified_folds(train, k, seed)
    fold_acc = np.empty((len(folds), len(candidates)))
    for f, (tr, va) in enumerate(folds):
        fold_acc[f] = _accuracies_per_scale(
            train.subset(tr), train.subset(va), candidates, seed, alphas
        )
        log.debug("fold %d accuracies %s", f, fold_acc[f])
    winners = np.argmax(fold_acc, axis=1)
    counts = np.bincount(winners, minlength=len(candidates))
    best = int(np.argmax(counts))
    wins = {candidates[q]: int(counts[q]) for q in range(len(candidates))}
    return ScaleSelection(candidates[best], wins, fold_acc)


def oracle_eval(train: TimeSeriesDataset, test: TimeSeriesDataset, candidates=DEFAULT_SCALES,
                seed=0, alphas=DEFAULT_ALPHAS):
    """Best scale judged on the test set itself; an upper-bound diagnostic.

    Returns ``(best_scale, {scale: accuracy})``; ties go to the smaller scale.
    """
    _check_train(train)
    if len(test) == 0:
        raise EmptyDataset("test set is empty")
    if test.length != train.length:
        raise LengthMismatch("train and test series lengths differ")
    candidates = sorted(float(s) for s in candidates)
    acc = _accuracies_per_scale(train, test, candidates, seed, alphas)
    best = int(np.argmax(acc))
    return candidates[best], {s: float(a) for s, a in zip(candidates, acc)}
