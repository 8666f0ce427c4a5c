import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credittrees import (ConfusionMatrix, Prediction, accuracy,
                         confusion_from_predictions, mae, rmse, summarize)


def cm(counts):
    return ConfusionMatrix(("good", "bad"), np.asarray(counts, dtype=float))


def test_accuracy_examples():
    # hand-checked: (655 + 106) / 1000 and (649 + 151) / 1000
    assert accuracy(cm([[655, 45], [194, 106]])) == pytest.approx(76.1)
    assert accuracy(cm([[649, 51], [149, 151]])) == pytest.approx(80.0)
    assert accuracy(cm([[10, 0], [0, 5]])) == pytest.approx(100.0)
    assert accuracy(cm([[0, 10], [5, 0]])) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        accuracy(cm([[0, 0], [0, 0]]))


def test_confusion_totals():
    m = cm([[655, 45], [194, 106]])
    assert m.total() == 1000
    assert m.correct() == 761
    assert m.actual_totals().tolist() == [700.0, 300.0]
    assert m.predicted_totals().tolist() == [849.0, 151.0]


def test_confusion_from_predictions():
    preds = [Prediction([0.9, 0.1], 0),
             Prediction([0.2, 0.8], 0),
             Prediction([0.5, 0.5], 1)]  # tie -> class 0
    m = confusion_from_predictions(preds, ("good", "bad"))
    assert m.counts.tolist() == [[1.0, 1.0], [1.0, 0.0]]
    assert preds[2].predicted_index == 0


def test_mae_rmse_trivial():
    perfect = [Prediction([1.0, 0.0], 0), Prediction([0.0, 1.0], 1)]
    assert mae(perfect) == 0.0
    assert rmse(perfect) == 0.0
    coin = [Prediction([0.5, 0.5], 0)]
    assert mae(coin) == pytest.approx(0.5)
    assert rmse(coin) == pytest.approx(0.5)
    # total miss: |0-1| and |1-0| average to 1
    wrong = [Prediction([0.0, 1.0], 0)]
    assert mae(wrong) == pytest.approx(1.0)
    assert rmse(wrong) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        mae([])


def test_mae_rmse_hand_worked():
    # one prediction (0.8, 0.2) with actual class 0:
    # |0.8-1| + |0.2-0| over 2 terms = 0.2; rmse = sqrt((0.04+0.04)/2)
    p = [Prediction([0.8, 0.2], 0)]
    assert mae(p) == pytest.approx(0.2)
    assert rmse(p) == pytest.approx(0.2)
    # three classes, actual 1
    q = [Prediction([0.5, 0.3, 0.2], 1)]
    assert mae(q) == pytest.approx((0.5 + 0.7 + 0.2) / 3)
    assert rmse(q) == pytest.approx(np.sqrt((0.25 + 0.49 + 0.04) / 3))


def test_permutation_invariance():
    rng = np.random.default_rng(0)
    preds = []
    for _ in range(50):
        d = rng.random(3)
        preds.append(Prediction(d / d.sum(), int(rng.integers(0, 3))))
    shuffled = list(preds)
    rng.shuffle(shuffled)
    assert mae(shuffled) == pytest.approx(mae(preds))
    assert rmse(shuffled) == pytest.approx(rmse(preds))
    a = confusion_from_predictions(preds, ("x", "y", "z"))
    b = confusion_from_predictions(shuffled, ("x", "y", "z"))
    assert (a.counts == b.counts).all()


def test_pooled_equals_weighted_fold_average():
    rng = np.random.default_rng(1)
    folds = []
    for size in (10, 10, 10):
        fold = []
        for _ in range(size):
            d = rng.random(2)
            fold.append(Prediction(d / d.sum(), int(rng.integers(0, 2))))
        folds.append(fold)
    pooled = [p for f in folds for p in f]
    assert mae(pooled) == pytest.approx(np.mean([mae(f) for f in folds]))
    assert rmse(pooled)**2 == pytest.approx(np.mean([rmse(f)**2 for f in folds]))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(0.001, 1), st.floats(0.001, 1),
                          st.integers(0, 1)),
                min_size=1, max_size=30))
def test_metric_bounds(rows):
    preds = [Prediction(np.array([a, b]) / (a + b), y) for a, b, y in rows]
    m, r = mae(preds), rmse(preds)
    assert 0.0 <= m <= 1.0
    assert 0.0 <= r <= 1.0
    assert m <= r + 1e-12  # RMSE dominates MAE
    s = summarize(preds, ("good", "bad"), build_time=0.5)
    assert s.correct + s.incorrect == len(preds)
    assert s.accuracy == pytest.approx(100.0 * s.correct / len(preds))
    assert s.mae == pytest.approx(m) and s.rmse == pytest.approx(r)
    assert s.build_time == 0.5


def test_summarize_fields():
    preds = [Prediction([0.7, 0.3], 0), Prediction([0.6, 0.4], 1)]
    s = summarize(preds, ("good", "bad"), build_time=1.25)
    assert s.correct == 1 and s.incorrect == 1
    assert s.accuracy == pytest.approx(50.0)
    assert s.confusion.counts.tolist() == [[1.0, 0.0], [1.0, 0.0]]
