"""Test-mode orchestration: training-set evaluation, pooled k-fold cross
validation, and cross-classifier comparison with ranking."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import stratified_folds
from .ladtree import train_ladtree
from .metrics import Prediction, summarize
from .reptree import GrowParams, train_reptree


@dataclass(frozen=True)
class TrainingSet:
    name: str = "training"

    def label(self):
        return "Training Set"


@dataclass(frozen=True)
class CrossValidation:
    k: int
    seed: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")

    def label(self):
        return "%d Fold CV" % self.k


@dataclass(frozen=True)
class RepTreeSpec:
    params: GrowParams = field(default_factory=GrowParams)
    name: str = "reptree"

    def train(self, dataset):
        return train_reptree(dataset, self.params)


@dataclass(frozen=True)
class LadTreeSpec:
    iterations: int = 10
    seed: int = 1  # reserved; training itself is deterministic
    name: str = "ladtree"

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")

    def train(self, dataset):
        return train_ladtree(dataset, self.iterations)


@dataclass
class RunReport:
    classifier: object
    summaries: list  # (mode, EvalSummary) pairs
    mean_cv_accuracy: float | None


def _labeled_indices(dataset):
    return [i for i, inst in enumerate(dataset.instances)
            if inst.class_index is not None]


def _predictions(model, dataset, indices):
    x, y, _ = dataset.matrix
    dist = model.predict_matrix(x[indices])
    return [Prediction(dist[j], int(y[i])) for j, i in enumerate(indices)]


def measure_build_time(spec, dataset):
    """Wall-clock training duration in seconds (training only)."""
    start = time.perf_counter()
    spec.train(dataset)
    return time.perf_counter() - start


def evaluate_training_set(spec, dataset):
    """Train on all labeled instances and score the same instances."""
    labeled = _labeled_indices(dataset)
    if not labeled:
        raise ValueError("no labeled instances")
    start = time.perf_counter()
    model = spec.train(dataset)
    build_time = time.perf_counter() - start
    preds = _predictions(model, dataset, labeled)
    return summarize(preds, dataset.schema.class_names, build_time)


def cross_validate(spec, dataset, k, seed):
    """Pooled k-fold CV: one confusion matrix and one MAE/RMSE over all N
    held-out predictions; build_time is the sum of per-fold training times."""
    labeled = _labeled_indices(dataset)
    work = dataset.subset(labeled)
    plan = stratified_folds(work, k, seed)
    preds = []
    build_time = 0.0
    for fold in plan.folds:
        test_idx = set(fold)
        train_set = work.subset([i for i in range(len(work)) if i not in test_idx])
        start = time.perf_counter()
        model = spec.train(train_set)
        build_time += time.perf_counter() - start
        preds.extend(_predictions(model, work, sorted(test_idx)))
    return summarize(preds, dataset.schema.class_names, build_time)


def evaluate(spec, dataset, mode):
    if isinstance(mode, TrainingSet):
        return evaluate_training_set(spec, dataset)
    return cross_validate(spec, dataset, mode.k, mode.seed)


def compare(specs, dataset, modes):
    """Run every (spec, mode) pair and rank the classifiers.

    Ranking: mean CV accuracy (higher better), then mean CV MAE and RMSE
    (lower better), then total build time, then declaration order. With no
    CV modes, training-set accuracy substitutes (not the published basis).
    """
    if len(specs) < 2:
        reports = [_run_report(s, dataset, modes) for s in specs]
        return reports, list(range(len(specs)))
    reports = [_run_report(s, dataset, modes) for s in specs]
    order = sorted(range(len(reports)), key=lambda i: _rank_key(reports[i], i))
    return reports, order


def _run_report(spec, dataset, modes):
    summaries = [(mode, evaluate(spec, dataset, mode)) for mode in modes]
    cv = [s for m, s in summaries if isinstance(m, CrossValidation)]
    mean_cv = float(np.mean([s.accuracy for s in cv])) if cv else None
    return RunReport(spec, summaries, mean_cv)


def _rank_key(report, declared_index):
    cv = [s for m, s in report.summaries if isinstance(m, CrossValidation)]
    pool = cv if cv else [s for _, s in report.summaries]
    acc = float(np.mean([s.accuracy for s in pool]))
    mean_mae = float(np.mean([s.mae for s in pool]))
    mean_rmse = float(np.mean([s.rmse for s in pool]))
    total_time = sum(s.build_time for _, s in report.summaries)
    return (-acc, mean_mae, mean_rmse, total_time, declared_index)
