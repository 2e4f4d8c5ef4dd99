"""Shuffled k-fold cross-validation, the column-permutation baseline and
the full builder x config x model evaluation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..seeding import derive_seed
from ..stats import mae as mae_score
from ..stats import pearson, spearman
from .features import FEATURE_CONFIGS
from .models import ModelSpec, fit, predict_matrix, rows_to_arrays


@dataclass(frozen=True)
class EvalResult:
    builder_tag: str
    config: str
    model_kind: str
    target: str
    rng_seed: int
    permuted: bool
    fold_maes: tuple[float, ...]
    fold_spearmans: tuple[float, ...]
    fold_pearsons: tuple[float, ...]
    mae: float
    spearman: float
    pearson: float
    predictions: dict[str, float]

    def to_dict(self):
        return {
            "builder": self.builder_tag,
            "config": self.config,
            "model": self.model_kind,
            "target": self.target,
            "rng_seed": self.rng_seed,
            "permuted": self.permuted,
            "folds": [
                {"fold": i, "mae": m, "spearman": s, "pearson": p}
                for i, (m, s, p) in enumerate(
                    zip(self.fold_maes, self.fold_spearmans, self.fold_pearsons)
                )
            ],
            "mae": self.mae,
            "spearman": self.spearman,
            "pearson": self.pearson,
            "predictions": self.predictions,
        }


def make_folds(n_rows, k, rng_seed):
    """Shuffle row indices and cut them into k near-equal test folds.

    The first (n mod k) folds take the extra row, so fold sizes differ by
    at most one.
    """
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if n_rows < k:
        raise ValueError(f"cannot split {n_rows} rows into {k} folds")
    rng = np.random.default_rng(rng_seed)
    order = rng.permutation(n_rows)
    base = n_rows // k
    extra = n_rows % k
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(order[start : start + size])
        start += size
    return folds


def kfold_cv(rows, model_spec, k=4, rng_seed=0, permuted=False):
    """Out-of-fold evaluation of one (builder, config, model) cell.

    Every row lands in exactly one test fold; per-fold MAE / Spearman /
    Pearson are aggregated by plain averaging.  Correlations on folds too
    small to define them (one row) are reported as 0.
    """
    if not rows:
        raise ValueError("cannot cross-validate an empty feature table")
    X, y, _ = rows_to_arrays(rows)
    folds = make_folds(len(rows), k, rng_seed)
    fold_maes = []
    fold_spearmans = []
    fold_pearsons = []
    predictions = {}
    for fold_idx, test_idx in enumerate(folds):
        test_mask = np.zeros(len(rows), dtype=bool)
        test_mask[test_idx] = True
        train_rows = [rows[i] for i in np.nonzero(~test_mask)[0]]
        fold_spec = replace(
            model_spec, rng_seed=derive_seed(model_spec.rng_seed, "fold", fold_idx)
        )
        model = fit(fold_spec, train_rows)
        preds = predict_matrix(model, X[test_idx])
        truth = y[test_idx]
        fold_maes.append(mae_score(preds, truth))
        if truth.size >= 2:
            fold_spearmans.append(spearman(preds, truth, warn=False))
            fold_pearsons.append(pearson(preds, truth, warn=False))
        else:
            fold_spearmans.append(0.0)
            fold_pearsons.append(0.0)
        for i, pred in zip(test_idx, preds):
            predictions[rows[i].story_id] = float(pred)
    first = rows[0]
    return EvalResult(
        builder_tag=first.builder_tag,
        config=first.config,
        model_kind=model_spec.kind,
        target="",
        rng_seed=rng_seed,
        permuted=permuted,
        fold_maes=tuple(fold_maes),
        fold_spearmans=tuple(fold_spearmans),
        fold_pearsons=tuple(fold_pearsons),
        mae=float(np.mean(fold_maes)),
        spearman=float(np.mean(fold_spearmans)),
        pearson=float(np.mean(fold_pearsons)),
        predictions=predictions,
    )


def permute_columns(rows, rng_seed):
    """Independently shuffle every feature column; targets stay put."""
    if not rows:
        return []
    names = rows[0].names()
    rng = np.random.default_rng(rng_seed)
    columns = {
        name: [rows[i].features[name] for i in rng.permutation(len(rows))]
        for name in names
    }
    return [
        replace(row, features={name: columns[name][i] for name in names})
        for i, row in enumerate(rows)
    ]


def permutation_baseline(rows, model_spec, k=4, rng_seed=0):
    """The identical CV protocol on column-permuted features."""
    permuted_rows = permute_columns(rows, derive_seed(rng_seed, "column-permutation"))
    return kfold_cv(permuted_rows, model_spec, k=k, rng_seed=rng_seed, permuted=True)


def run_matrix(
    features,
    targets,
    builders,
    configs,
    model_specs,
    k=4,
    rng_seed=0,
    with_baseline=False,
):
    """Evaluate every (target, builder, config, model) cell.

    `features` is a CorpusFeatures bundle; `model_specs` maps model kind
    to a ModelSpec template whose per-cell seed is derived from the master
    seed, so results do not depend on evaluation order.
    """
    for config in configs:
        if config not in FEATURE_CONFIGS:
            raise ValueError(f"unknown feature configuration {config!r}")
    results = []
    for target in targets:
        for builder in builders:
            for config in configs:
                rows = features.rows(builder, config, target)
                for kind, spec in model_specs.items():
                    cell_seed = derive_seed(rng_seed, target, builder, config, kind)
                    cell_spec = ModelSpec(
                        kind=spec.kind,
                        hyperparameters=dict(spec.hyperparameters),
                        rng_seed=cell_seed,
                    )
                    result = kfold_cv(rows, cell_spec, k=k, rng_seed=cell_seed)
                    results.append(replace(result, target=target))
                    if with_baseline:
                        baseline = permutation_baseline(rows, cell_spec, k=k, rng_seed=cell_seed)
                        results.append(replace(baseline, target=target))
    return results


def select_best(results, target):
    """Lowest MAE among non-permuted results for `target`; ties break to
    the higher Spearman correlation."""
    candidates = [r for r in results if r.target == target and not r.permuted]
    if not candidates:
        raise ValueError(f"no results for target {target!r}")
    return min(candidates, key=lambda r: (r.mae, -r.spearman))


def rank_results(results, target):
    candidates = [r for r in results if r.target == target and not r.permuted]
    return sorted(candidates, key=lambda r: (r.mae, -r.spearman))
