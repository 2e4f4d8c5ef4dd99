"""Synthetic regression data with a planted linear signal.

The committed reference generator behind the pipeline sanity checks: a
standard-normal design, a fixed unit-norm coefficient vector, and
additive Gaussian noise of known scale.
"""

from __future__ import annotations

import numpy as np

from .features import FeatureRow


def planted_linear_data(n_rows=400, n_features=18, noise=0.1, rng_seed=0):
    """Returns (X, y, coef) with y = X @ coef + noise * eps, |coef| = 1."""
    rng = np.random.default_rng(rng_seed)
    X = rng.normal(size=(n_rows, n_features))
    coef = rng.normal(size=n_features)
    coef /= np.linalg.norm(coef)
    y = X @ coef + noise * rng.normal(size=n_rows)
    return X, y, coef


def planted_feature_rows(n_rows=400, n_features=18, noise=0.1, rng_seed=0):
    X, y, coef = planted_linear_data(n_rows, n_features, noise, rng_seed)
    names = [f"f{i:02d}" for i in range(n_features)]
    rows = [
        FeatureRow(
            story_id=f"synth-{i:04d}",
            builder_tag="synthetic",
            config="All",
            features={name: float(v) for name, v in zip(names, X[i])},
            target=float(y[i]),
        )
        for i in range(n_rows)
    ]
    return rows, coef
