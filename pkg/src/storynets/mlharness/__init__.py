from .cv import (
    EvalResult,
    kfold_cv,
    make_folds,
    permutation_baseline,
    permute_columns,
    rank_results,
    run_matrix,
    select_best,
)
from .features import (
    ALPHA_FEATURE_NAMES,
    EMOTION_FEATURE_NAMES,
    FEATURE_CONFIGS,
    CorpusFeatures,
    FeatureRow,
    assemble_features,
)
from .models import (
    DEFAULT_HYPERPARAMETERS,
    MODEL_KINDS,
    ModelSpec,
    SingularDesignWarning,
    TrainedModel,
    fit,
    predict,
    predict_matrix,
)
from .shapley import ShapleyResult, attribution_csv, shapley_attribution
from .synthetic import planted_feature_rows, planted_linear_data

__all__ = [
    "ALPHA_FEATURE_NAMES",
    "DEFAULT_HYPERPARAMETERS",
    "EMOTION_FEATURE_NAMES",
    "FEATURE_CONFIGS",
    "MODEL_KINDS",
    "CorpusFeatures",
    "EvalResult",
    "FeatureRow",
    "ModelSpec",
    "ShapleyResult",
    "SingularDesignWarning",
    "TrainedModel",
    "assemble_features",
    "attribution_csv",
    "fit",
    "kfold_cv",
    "make_folds",
    "permutation_baseline",
    "permute_columns",
    "planted_feature_rows",
    "planted_linear_data",
    "predict",
    "predict_matrix",
    "rank_results",
    "run_matrix",
    "select_best",
    "shapley_attribution",
]
