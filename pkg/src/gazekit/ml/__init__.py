"""Reading-vs-video classifiers and their evaluation protocols."""
from .forest import (
    ForestHyperparams,
    ForestModel,
    forest_from_dict,
    forest_to_dict,
    predict_forest,
    predict_forest_batch,
    train_forest,
)
from .mlp import (
    AdamState,
    MlpHyperparams,
    MlpModel,
    StandardizerParams,
    adam_step,
    apply_standardizer,
    fit_standardizer,
    loss_and_gradients,
    mlp_from_dict,
    mlp_to_dict,
    predict_mlp,
    predict_mlp_label,
    train_mlp,
)
from .evaluation import (
    EvalReport,
    evaluate,
    format_eval_table,
    metrics_from_confusion,
    split_75_25,
)

__all__ = [
    "AdamState",
    "EvalReport",
    "ForestHyperparams",
    "ForestModel",
    "MlpHyperparams",
    "MlpModel",
    "StandardizerParams",
    "adam_step",
    "apply_standardizer",
    "evaluate",
    "fit_standardizer",
    "forest_from_dict",
    "forest_to_dict",
    "format_eval_table",
    "loss_and_gradients",
    "metrics_from_confusion",
    "mlp_from_dict",
    "mlp_to_dict",
    "predict_forest",
    "predict_forest_batch",
    "predict_mlp",
    "predict_mlp_label",
    "split_75_25",
    "train_forest",
    "train_mlp",
]
