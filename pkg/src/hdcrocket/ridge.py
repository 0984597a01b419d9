"""Standardisation and one-vs-rest ridge classification with LOO alpha choice."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLabels, DimensionMismatch, EmptyDataset

__all__ = [
    "DEFAULT_ALPHAS",
    "EPS",
    "Standardizer",
    "RidgeModel",
    "standardize_fit",
    "standardize_apply",
    "onehot_targets",
    "loo_errors",
    "ridge_fit",
    "predict",
    "decision_function",
]

DEFAULT_ALPHAS = np.logspace(-3, 3, 10)
EPS = 1e-8


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    def apply(self, X) -> np.ndarray:
        return standardize_apply(self, X)


def standardize_fit(X) -> Standardizer:
    """Column mean and population std, the std floored at ``EPS``.

    Constant columns take their common value as mean so that they map to
    exactly zero on the training data.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise EmptyDataset("standardisation needs at least one row")
    mean = X.mean(axis=0)
    constant = np.all(X == X[0], axis=0)
    mean[constant] = X[0, constant]
    std = X.std(axis=0)
    std[constant] = 0.0
    return Standardizer(mean, np.maximum(std, EPS))


def standardize_apply(st: Standardizer, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.shape[-1] != st.mean.shape[0]:
        raise DimensionMismatch(f"expected {st.mean.shape[0]} columns, got {X.shape[-1]}")
    return (X - st.mean) / st.scale


@dataclass(frozen=True)
class RidgeModel:
    weights: np.ndarray  # (n_classes, D)
    intercepts: np.ndarray  # (n_classes,)
    alpha: float
    alphas: np.ndarray
    classes: tuple[str, ...]
    cv_errors: np.ndarray | None = None

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def onehot_targets(labels, n_classes: int) -> np.ndarray:
    """+1 for the true class column, -1 elsewhere."""
    labels = np.asarray(labels, dtype=np.int64)
    Y = -np.ones((labels.shape[0], n_classes))
    Y[np.arange(labels.shape[0]), labels] = 1.0
    return Y


def _centered(X, Y):
    x_mean = X.mean(axis=0)
    y_mean = Y.mean(axis=0)
    return X - x_mean, Y - y_mean, x_mean, y_mean


def _gram_eigen(Xc):
    evals, Q = np.linalg.eigh(Xc @ Xc.T)
    return np.clip(evals, 0.0, None), Q


def loo_errors(X, Y, alphas=DEFAULT_ALPHAS) -> np.ndarray:
    """Mean squared leave-one-out residual for each alpha.

    The intercept is unpenalised. With ``K = Xc Xc^T = Q diag(lam) Q^T`` the
    hat matrix is ``Q diag(lam / (lam + alpha)) Q^T + 1/N`` and the LOO
    residual of row ``i`` is ``(y_i - yhat_i) / (1 - h_ii)``.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    N = X.shape[0]
    Xc, Yc, _, _ = _centered(X, Y)
    evals, Q = _gram_eigen(Xc)
    QtY = Q.T @ Yc
    errors = np.empty(len(alphas))
    for a, alpha in enumerate(alphas):
        shrink = evals / (evals + alpha)
        fitted = Q @ (shrink[:, None] * QtY)
        h = (Q**2) @ shrink + 1.0 / N
        resid = (Yc - fitted) / (1.0 - h)[:, None]
        errors[a] = np.mean(resid**2)
    return errors


def ridge_fit(X, labels, alphas=DEFAULT_ALPHAS, classes=None) -> RidgeModel:
    """Fit one-vs-rest ridge regression, picking alpha by closed-form LOO.

    Ties in LOO error go to the smaller alpha.
    """
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("ridge fit needs training rows")
    if X.shape[0] != labels.shape[0]:
        raise DimensionMismatch("one label per row required")
    if classes is None:
        classes = tuple(str(c) for c in range(int(labels.max()) + 1))
    classes = tuple(classes)
    if np.unique(labels).size < 2:
        raise DegenerateLabels("at least two classes must be present")

    alphas = np.sort(np.asarray(alphas, dtype=np.float64))
    Y = onehot_targets(labels, len(classes))
    errors = loo_errors(X, Y, alphas)
    best = int(np.argmin(errors))
    alpha = float(alphas[best])

    Xc, Yc, x_mean, y_mean = _centered(X, Y)
    evals, Q = _gram_eigen(Xc)
    dual = Q @ ((Q.T @ Yc) / (evals + alpha)[:, None])
    W = (Xc.T @ dual).T
    b = y_mean - W @ x_mean
    return RidgeModel(W, b, alpha, alphas, classes, errors)


def decision_function(model: RidgeModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(f"expected {model.n_features} columns, got {X.shape[1]}")
    return X @ model.weights.T + model.intercepts


def predict(model: RidgeModel, st: Standardizer | None, X):
    """Return ``(labels, scores)``; ties go to the lowest class index."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(f"expected {model.n_features} columns, got {X.shape[1]}")
    if st is not None:
        X = standardize_apply(st, X)
    scores = decision_function(model, X)
    return np.argmax(scores, axis=1), scores
