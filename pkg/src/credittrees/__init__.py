"""REP Tree and LAD Tree classifiers with a credit-risk evaluation harness."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .dataset import (AttributeSpec, DataFormatError, Dataset, FoldPlan, Instance,
                      Schema, german_credit_schema, load_german_credit, parse_arff,
                      parse_csv, split_grow_prune, stratified_folds)
from .evaluation import (CrossValidation, LadTreeSpec, RepTreeSpec, TrainingSet,
                         compare, cross_validate, evaluate_training_set,
                         measure_build_time)
from .ladtree import LadTreeModel, train_ladtree
from .metrics import (ConfusionMatrix, EvalSummary, Prediction, accuracy,
                      confusion_from_predictions, mae, rmse, summarize)
from .reptree import (GrowParams, RepTreeModel, backfit, best_split, entropy,
                      grow_tree, info_gain, prune_tree, train_reptree)

__all__ = [
    "AttributeSpec", "DataFormatError", "Dataset", "FoldPlan", "Instance",
    "Schema", "german_credit_schema", "load_german_credit", "parse_arff",
    "parse_csv", "split_grow_prune", "stratified_folds",
    "CrossValidation", "LadTreeSpec", "RepTreeSpec", "TrainingSet", "compare",
    "cross_validate", "evaluate_training_set", "measure_build_time",
    "LadTreeModel", "train_ladtree",
    "ConfusionMatrix", "EvalSummary", "Prediction", "accuracy",
    "confusion_from_predictions", "mae", "rmse", "summarize",
    "GrowParams", "RepTreeModel", "backfit", "best_split", "entropy",
    "grow_tree", "info_gain", "prune_tree", "train_reptree",
    "KERNEL_BACKEND",
]

__version__ = "0.1.0"
