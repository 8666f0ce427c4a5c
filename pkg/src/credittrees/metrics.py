"""Performance measures: accuracy, MAE, RMSE, confusion matrix.

MAE and RMSE follow the probability-vs-indicator convention: each instance
contributes K terms |p_k - t_k| (or squared), averaged over N*K, where t is
the 0/1 actual-class indicator. Hard 0/1 predictions would make MAE equal
the error rate, which is not how the target result tables behave.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Prediction:
    distribution: np.ndarray
    actual_index: int

    def __post_init__(self):
        self.distribution = np.asarray(self.distribution, dtype=float)

    @property
    def predicted_index(self):
        # argmax with ties broken toward the lowest class index
        return int(np.argmax(self.distribution))


@dataclass
class ConfusionMatrix:
    classes: tuple
    counts: np.ndarray  # counts[actual][predicted], weighted

    def correct(self):
        return float(np.trace(self.counts))

    def total(self):
        return float(self.counts.sum())

    def actual_totals(self):
        return self.counts.sum(axis=1)

    def predicted_totals(self):
        return self.counts.sum(axis=0)


@dataclass
class EvalSummary:
    correct: float
    incorrect: float
    accuracy: float  # percent
    mae: float
    rmse: float
    build_time: float  # seconds
    confusion: ConfusionMatrix
    extra: dict = field(default_factory=dict)


def confusion_from_predictions(predictions, classes):
    k = len(classes)
    counts = np.zeros((k, k))
    for p in predictions:
        counts[p.actual_index, p.predicted_index] += 1.0
    return ConfusionMatrix(tuple(classes), counts)


def accuracy(confusion):
    """Percent of correctly classified instances: 100 * trace / total."""
    total = confusion.total()
    if total <= 0:
        raise ValueError("empty confusion matrix")
    return 100.0 * confusion.correct() / total


def _indicator_diffs(predictions):
    if not predictions:
        raise ValueError("no predictions")
    dist = np.stack([p.distribution for p in predictions])
    target = np.zeros_like(dist)
    target[np.arange(len(predictions)), [p.actual_index for p in predictions]] = 1.0
    return dist - target


def mae(predictions):
    d = _indicator_diffs(predictions)
    return float(np.abs(d).mean())


def rmse(predictions):
    d = _indicator_diffs(predictions)
    return float(np.sqrt((d * d).mean()))


def summarize(predictions, classes, build_time):
    cm = confusion_from_predictions(predictions, classes)
    correct = cm.correct()
    total = cm.total()
    return EvalSummary(
        correct=correct,
        incorrect=total - correct,
        accuracy=100.0 * correct / total,
        mae=mae(predictions),
        rmse=rmse(predictions),
        build_time=build_time,
        confusion=cm,
    )
