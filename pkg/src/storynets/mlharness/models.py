"""The five regression models behind one fit/predict surface.

Linear least squares (ridge fallback on singular designs), distance-
weighted k-NN, a depth-limited decision tree, a bootstrap random forest
and least-squares gradient boosting.  Features are z-scaled on the
training rows for the linear and k-NN models; tree models consume raw
features.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import trees

MODEL_KINDS = ("linear", "knn", "decision_tree", "random_forest", "gradient_boosting")

DEFAULT_HYPERPARAMETERS = {
    "linear": {"ridge_lambda": 0.0},
    "knn": {"n_neighbors": 15, "weights": "distance", "p": 1},
    "decision_tree": {"max_depth": 4, "min_samples_leaf": 3, "min_impurity_decrease": 0.001},
    "random_forest": {
        "n_estimators": 500,
        "min_samples_leaf": 5,
        "max_features": 0.7,
        "bootstrap": True,
        "max_depth": None,
    },
    "gradient_boosting": {
        "n_estimators": 800,
        "learning_rate": 0.01,
        "max_depth": 2,
        "subsample": 0.7,
        "min_samples_leaf": 3,
    },
}

_SCALED_KINDS = frozenset({"linear", "knn"})


class SingularDesignWarning(RuntimeWarning):
    """Exact least squares hit a rank-deficient design; ridge applied."""


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        merged = dict(DEFAULT_HYPERPARAMETERS[self.kind])
        for key, value in self.hyperparameters.items():
            if key not in merged:
                raise ValueError(f"unknown hyperparameter {key!r} for {self.kind}")
            merged[key] = value
        _validate_hyperparameters(self.kind, merged)
        object.__setattr__(self, "hyperparameters", merged)


def _validate_hyperparameters(kind, hp):
    if kind == "linear":
        if hp["ridge_lambda"] < 0:
            raise ValueError("ridge_lambda must be >= 0")
    elif kind == "knn":
        if hp["n_neighbors"] < 1:
            raise ValueError("n_neighbors must be >= 1")
        if hp["weights"] not in ("distance", "uniform"):
            raise ValueError("weights must be 'distance' or 'uniform'")
        if hp["p"] not in (1, 2):
            raise ValueError("p must be 1 (Manhattan) or 2 (Euclidean)")
    elif kind in ("decision_tree", "random_forest", "gradient_boosting"):
        if hp["min_samples_leaf"] < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if kind != "decision_tree" and hp["n_estimators"] < 1:
            raise ValueError("n_estimators must be >= 1")
        if kind == "gradient_boosting" and not 0 < hp["subsample"] <= 1:
            raise ValueError("subsample must lie in (0, 1]")
        if kind == "random_forest" and not 0 < hp["max_features"] <= 1:
            raise ValueError("max_features must lie in (0, 1]")


@dataclass
class Scaler:
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X):
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale = np.where(scale == 0.0, 1.0, scale)
        return cls(mean=mean, scale=scale)

    def transform(self, X):
        return (X - self.mean) / self.scale


@dataclass
class TrainedModel:
    spec: ModelSpec
    feature_names: tuple[str, ...]
    estimator: object
    scaler: Scaler | None
    background: np.ndarray  # raw training design, Shapley background set


def rows_to_arrays(rows):
    names = rows[0].names()
    for row in rows:
        if row.names() != names:
            raise ValueError("feature name sets differ across rows of one table")
    X = np.array([row.vector() for row in rows], dtype=float)
    y = np.array([row.target for row in rows], dtype=float)
    return X, y, names


def fit(spec, rows):
    """Train `spec` on FeatureRows; scaling statistics come from these rows only."""
    if not rows:
        raise ValueError("cannot fit on an empty table")
    X, y, names = rows_to_arrays(rows)
    minimum = 5
    if spec.kind == "knn":
        minimum = max(minimum, spec.hyperparameters["n_neighbors"])
    if X.shape[0] < minimum:
        raise ValueError(
            f"{spec.kind} needs at least {minimum} training rows, got {X.shape[0]}"
        )
    scaler = Scaler.fit(X) if spec.kind in _SCALED_KINDS else None
    X_in = scaler.transform(X) if scaler is not None else X
    rng = np.random.default_rng(spec.rng_seed)
    hp = spec.hyperparameters
    if spec.kind == "linear":
        estimator = _fit_linear(X_in, y, hp["ridge_lambda"], scaler)
    elif spec.kind == "knn":
        estimator = _KNN(X_in, y, hp["n_neighbors"], hp["weights"], hp["p"])
    elif spec.kind == "decision_tree":
        estimator = _Tree(
            trees.fit_tree(
                X_in,
                y,
                max_depth=hp["max_depth"],
                min_samples_leaf=hp["min_samples_leaf"],
                min_impurity_decrease=hp["min_impurity_decrease"],
            )
        )
    elif spec.kind == "random_forest":
        estimator = _Forest(
            trees.fit_forest(
                X_in,
                y,
                n_estimators=hp["n_estimators"],
                min_samples_leaf=hp["min_samples_leaf"],
                max_features=hp["max_features"],
                bootstrap=hp["bootstrap"],
                max_depth=hp["max_depth"],
                rng=rng,
            )
        )
    else:
        estimator = _Boost(
            trees.fit_boosting(
                X_in,
                y,
                n_estimators=hp["n_estimators"],
                learning_rate=hp["learning_rate"],
                max_depth=hp["max_depth"],
                subsample=hp["subsample"],
                min_samples_leaf=hp["min_samples_leaf"],
                rng=rng,
            )
        )
    return TrainedModel(
        spec=spec, feature_names=names, estimator=estimator, scaler=scaler, background=X
    )


def predict_matrix(model, X):
    X = np.asarray(X, dtype=float)
    if model.scaler is not None:
        X = model.scaler.transform(X)
    return model.estimator.predict(X)


def predict(model, row):
    """Predict one FeatureRow (or bare feature vector)."""
    if hasattr(row, "features"):
        vec = [row.features[name] for name in model.feature_names]
    else:
        vec = row
    return float(predict_matrix(model, np.asarray(vec, dtype=float)[None, :])[0])


@dataclass
class _LinearEstimator:
    weights: np.ndarray  # on scaled features, intercept last
    coef_: np.ndarray  # back-transformed to the original feature space
    intercept_: float

    def predict(self, X):
        return X @ self.weights[:-1] + self.weights[-1]


def _fit_linear(X_scaled, y, ridge_lambda, scaler):
    n, f = X_scaled.shape
    design = np.hstack([X_scaled, np.ones((n, 1))])
    lam = ridge_lambda
    if lam == 0.0:
        if np.linalg.matrix_rank(design) < design.shape[1]:
            warnings.warn(
                "singular design for exact least squares; falling back to ridge 1e-8",
                SingularDesignWarning,
                stacklevel=3,
            )
            lam = 1e-8
        else:
            weights, *_ = np.linalg.lstsq(design, y, rcond=None)
            return _finish_linear(weights, scaler)
    penalty = np.eye(f + 1) * lam
    penalty[f, f] = 0.0  # intercept unpenalised
    weights = np.linalg.solve(design.T @ design + penalty, design.T @ y)
    return _finish_linear(weights, scaler)


def _finish_linear(weights, scaler):
    coef_scaled = weights[:-1]
    coef = coef_scaled / scaler.scale
    intercept = float(weights[-1] - np.sum(coef_scaled * scaler.mean / scaler.scale))
    return _LinearEstimator(weights=weights, coef_=coef, intercept_=intercept)


@dataclass
class _KNN:
    X_train: np.ndarray
    y_train: np.ndarray
    k: int
    weights: str
    p: int

    def predict(self, X):
        out = np.empty(X.shape[0])
        for i, x in enumerate(X):
            diff = self.X_train - x
            if self.p == 1:
                dist = np.abs(diff).sum(axis=1)
            else:
                dist = np.sqrt((diff**2).sum(axis=1))
            order = np.argsort(dist, kind="stable")[: self.k]
            d = dist[order]
            targets = self.y_train[order]
            if self.weights == "uniform":
                out[i] = targets.mean()
            elif np.any(d == 0.0):
                out[i] = targets[d == 0.0].mean()
            else:
                w = 1.0 / d
                out[i] = float(np.sum(w * targets) / np.sum(w))
        return out


@dataclass
class _Tree:
    arrays: trees.TreeArrays

    def predict(self, X):
        return trees.predict_tree(self.arrays, X)


@dataclass
class _Forest:
    arrays: trees.ForestArrays

    def predict(self, X):
        return trees.predict_forest(self.arrays, X)


@dataclass
class _Boost:
    arrays: trees.BoostArrays

    def predict(self, X):
        return trees.predict_boosting(self.arrays, X)
