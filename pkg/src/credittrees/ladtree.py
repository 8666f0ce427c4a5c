"""LAD Tree: a multiclass alternating decision tree grown with LogitBoost.

One binary splitter node (numeric threshold or nominal equality) is added
per boosting iteration under whichever existing prediction node gives the
largest reduction in weighted squared error of the per-class working
responses. Per-class trees share one splitter skeleton: each prediction node
carries a vector of additive scores, one entry per class, which realizes the
"grown in parallel, then merged" construction as a single structure.

An instance's score vector is the sum of the value vectors over every
prediction node it reaches; a missing value at a splitter sends the instance
down both branches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dataset import schema_from_dict, schema_to_dict

MODEL_FORMAT = "LADTREE 1"

P_CLAMP = 1e-5
Z_MAX = 4.0


class PredictionNode:
    __slots__ = ("values", "splitters")

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)
        self.splitters = []


class SplitterNode:
    __slots__ = ("attribute", "threshold", "category", "true_node", "false_node")

    def __init__(self, attribute, threshold, category, true_node, false_node):
        self.attribute = attribute
        self.threshold = threshold  # numeric test: value <= threshold
        self.category = category    # nominal test: value == category
        self.true_node = true_node
        self.false_node = false_node


@dataclass
class LadTreeModel:
    root: PredictionNode
    schema: object
    iterations_run: int

    def score_matrix(self, x):
        n = x.shape[0]
        out = np.zeros((n, self.schema.n_classes))
        _score_rec(self.root, x, np.ones(n, dtype=bool), out)
        return out

    def score(self, instance):
        row = _instance_row(instance, self.schema)
        return self.score_matrix(row[None, :])[0]

    def predict_matrix(self, x):
        return probabilities_from_scores_matrix(self.score_matrix(x))

    def predict_distribution(self, instance):
        return probabilities_from_scores(self.score(instance))

    def n_splitters(self):
        def count(node):
            return sum(1 + count(s.true_node) + count(s.false_node)
                       for s in node.splitters)
        return count(self.root)

    def to_text(self):
        lines = [MODEL_FORMAT,
                 "schema %s" % json.dumps(schema_to_dict(self.schema), sort_keys=True),
                 "iterations %d" % self.iterations_run]
        _write_pred(self.root, lines, 0)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        if not lines or lines[0] != MODEL_FORMAT:
            raise ValueError("not a %s model file" % MODEL_FORMAT)
        schema = schema_from_dict(json.loads(lines[1].split(" ", 1)[1]))
        iterations = int(lines[2].split(" ", 1)[1])
        root, _ = _read_pred(lines, 3)
        return cls(root, schema, iterations)


def probabilities_from_scores(f):
    """Stable softmax over per-class additive scores."""
    f = np.asarray(f, dtype=float)
    e = np.exp(f - f.max())
    return e / e.sum()


def probabilities_from_scores_matrix(f):
    e = np.exp(f - f.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def working_response_and_weight(y, p):
    """LogitBoost working response z=(y-p)/(p(1-p)) and weight w=p(1-p).

    p is clamped away from {0,1} and z is clamped to +/-Z_MAX.
    """
    p = min(max(p, P_CLAMP), 1.0 - P_CLAMP)
    w = p * (1.0 - p)
    z = (y - p) / w
    z = min(max(z, -Z_MAX), Z_MAX)
    return z, w


def least_squares_value(pairs):
    """Weighted mean sum(w*z)/sum(w); the minimizer of sum(w*(z-c)^2).

    Empty or zero-weight input gives 0.
    """
    sw = sz = 0.0
    for z, w in pairs:
        sz += w * z
        sw += w
    return sz / sw if sw > 0 else 0.0


class BoostState:
    """Per-instance, per-class boosting state over the training matrix."""

    def __init__(self, x, y_indicator, f):
        self.x = x
        self.y = y_indicator  # (n, K) 0/1
        self.f = f            # (n, K) additive scores
        self.p = None
        self.w = None
        self.z = None
        self.refresh()

    def refresh(self):
        p = probabilities_from_scores_matrix(self.f)
        pc = np.clip(p, P_CLAMP, 1.0 - P_CLAMP)
        self.p = p
        self.w = pc * (1.0 - pc)
        self.z = np.clip((self.y - pc) / self.w, -Z_MAX, Z_MAX)


class GrowthStop(Exception):
    """No legal (host, test) candidate remains."""


@dataclass
class _Winner:
    host: PredictionNode
    host_mask: np.ndarray
    attribute: int
    threshold: float | None
    category: int | None
    gain: float


def _branch_values(state, mask_true, mask_false):
    """Least-squares per-class values for the two branches."""
    zw = state.w * state.z
    vals = []
    for mask in (mask_true, mask_false):
        sw = state.w[mask].sum(axis=0)
        sz = zw[mask].sum(axis=0)
        with np.errstate(invalid="ignore"):
            c = np.where(sw > 0, sz / np.maximum(sw, 1e-300), 0.0)
        vals.append(c)
    return vals


def choose_splitter(model, members, state, categories):
    """Exhaustive scan over (host prediction node, binary test) candidates.

    members maps each prediction node to its boolean membership mask (an
    instance missing a tested value is a member of both branches). The
    winner maximizes the least-squares gain sum_k sum_branch (S_wz)^2/S_w,
    equivalent to minimizing total weighted squared error with non-members
    fitted by 0. Ties break by host insertion order, then attribute index,
    then threshold/category order.
    """
    zw = state.w * state.z
    best = None
    hosts = _prediction_nodes(model.root)
    for host in hosts:
        mask = members[id(host)]
        if not mask.any():
            continue
        midx = np.nonzero(mask)[0]
        for a in range(state.x.shape[1]):
            col = state.x[midx, a]
            known = ~np.isnan(col)
            extra_zw = zw[midx[~known]].sum(axis=0)
            extra_w = state.w[midx[~known]].sum(axis=0)
            if categories[a] is None:
                kidx = midx[known]
                if len(kidx) < 2:
                    continue
                order = np.argsort(col[known], kind="stable")
                vs = np.ascontiguousarray(col[known][order])
                zws = np.ascontiguousarray(zw[kidx][order])
                ws = np.ascontiguousarray(state.w[kidx][order])
                thresholds, gains = _kernels.lad_numeric_scan(
                    vs, zws, ws, extra_zw, extra_w)
                if len(thresholds) == 0:
                    continue
                i = int(np.argmax(gains))
                if best is None or gains[i] > best.gain:
                    best = _Winner(host, mask, a, float(thresholds[i]), None,
                                   float(gains[i]))
            else:
                for c in range(categories[a]):
                    tmask = known & (col == c)
                    tz = zw[midx[tmask]].sum(axis=0) + extra_zw
                    tw = state.w[midx[tmask]].sum(axis=0) + extra_w
                    fz = zw[midx[known & ~tmask]].sum(axis=0) + extra_zw
                    fw = state.w[midx[known & ~tmask]].sum(axis=0) + extra_w
                    gain = float((np.where(tw > 0, tz * tz / np.maximum(tw, 1e-300), 0)
                                  + np.where(fw > 0, fz * fz / np.maximum(fw, 1e-300), 0)
                                  ).sum())
                    if best is None or gain > best.gain:
                        best = _Winner(host, mask, a, None, c, gain)
    if best is None:
        raise GrowthStop("no legal splitter candidate")
    return best


def _prediction_nodes(root):
    """All prediction nodes in insertion (pre-order, branch-true-first) order."""
    out = [root]
    i = 0
    while i < len(out):
        for s in out[i].splitters:
            out.append(s.true_node)
            out.append(s.false_node)
        i += 1
    return out


def _test_masks(x, mask, winner):
    col = x[:, winner.attribute]
    known = ~np.isnan(col)
    if winner.threshold is not None:
        true_known = known & (col <= winner.threshold)
    else:
        true_known = known & (col == winner.category)
    miss = mask & ~known
    return (mask & true_known) | miss, (mask & known & ~true_known) | miss


def boost_iteration(model, members, state, categories, k):
    """One LogitBoost step: refresh (p, z, w), pick the winning splitter,
    attach it with mean-centered, (K-1)/K-scaled branch values, and update
    the cached scores of affected instances."""
    state.refresh()
    winner = choose_splitter(model, members, state, categories)
    mask_true, mask_false = _test_masks(state.x, winner.host_mask, winner)
    c_true, c_false = _branch_values(state, mask_true, mask_false)
    scale = (k - 1.0) / k
    v_true = scale * (c_true - c_true.mean())
    v_false = scale * (c_false - c_false.mean())
    true_node = PredictionNode(v_true)
    false_node = PredictionNode(v_false)
    winner.host.splitters.append(SplitterNode(
        winner.attribute, winner.threshold, winner.category, true_node, false_node))
    members[id(true_node)] = mask_true
    members[id(false_node)] = mask_false
    state.f[mask_true] += v_true
    state.f[mask_false] += v_false
    return model, state


def train_ladtree(train, iterations=10):
    """Boost an alternating tree for `iterations` splitter nodes (or until
    no legal candidate remains). Root values come from the class priors via
    the logistic link. Deterministic for fixed (instance order, iterations)."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    x, y, w = train.matrix
    labeled = np.nonzero(y >= 0)[0]
    if len(labeled) == 0:
        raise ValueError("no labeled instances to train on")
    x = x[labeled]
    y = y[labeled]
    schema = train.schema
    k = schema.n_classes
    categories = [len(a.categories) if a.is_nominal else None
                  for a in schema.attributes]

    priors = np.bincount(y, weights=w[labeled], minlength=k)
    priors = np.maximum(priors / priors.sum(), 1e-10)
    root_values = np.log(priors) - np.log(priors).mean()
    root = PredictionNode(root_values)
    model = LadTreeModel(root, schema, 0)

    n = len(y)
    y_ind = np.zeros((n, k))
    y_ind[np.arange(n), y] = 1.0
    f = np.tile(root_values, (n, 1))
    state = BoostState(x, y_ind, f)
    members = {id(root): np.ones(n, dtype=bool)}

    for _ in range(iterations):
        try:
            boost_iteration(model, members, state, categories, k)
        except GrowthStop:
            break
        model.iterations_run += 1
    return model


def _score_rec(node, x, mask, out):
    out[mask] += node.values
    for s in node.splitters:
        col = x[:, s.attribute]
        known = ~np.isnan(col)
        if s.threshold is not None:
            true_known = known & (col <= s.threshold)
        else:
            true_known = known & (col == s.category)
        miss = mask & ~known
        tmask = (mask & true_known) | miss
        fmask = (mask & known & ~true_known) | miss
        if tmask.any():
            _score_rec(s.true_node, x, tmask, out)
        if fmask.any():
            _score_rec(s.false_node, x, fmask, out)


def _instance_row(instance, schema):
    values = instance.values if hasattr(instance, "values") else instance
    row = np.full(len(schema.attributes), np.nan)
    for j, v in enumerate(values):
        if v is not None:
            row[j] = v
    return row


def _fmt_array(a):
    return ",".join(repr(float(v)) for v in a)


def _parse_array(s):
    return np.array([float(v) for v in s.split(",")])


def _write_pred(node, lines, depth):
    pad = "  " * depth
    lines.append("%spred values=%s nsplit=%d"
                 % (pad, _fmt_array(node.values), len(node.splitters)))
    for s in node.splitters:
        if s.threshold is not None:
            test = "numeric<=%s" % repr(float(s.threshold))
            lines.append("%s  split attr=%d %s" % (pad, s.attribute, test))
        else:
            lines.append("%s  split attr=%d nominal==%d" % (pad, s.attribute, s.category))
        _write_pred(s.true_node, lines, depth + 2)
        _write_pred(s.false_node, lines, depth + 2)


def _read_pred(lines, pos):
    body = lines[pos].strip()
    fields = dict(tok.split("=", 1) for tok in body.split(" ")[1:])
    node = PredictionNode(_parse_array(fields["values"]))
    nsplit = int(fields["nsplit"])
    pos += 1
    for _ in range(nsplit):
        sbody = lines[pos].strip().split(" ")
        attr = int(sbody[1].split("=", 1)[1])
        test = sbody[2]
        if test.startswith("numeric<="):
            threshold, category = float(test[len("numeric<="):]), None
        else:
            threshold, category = None, int(test[len("nominal=="):])
        pos += 1
        true_node, pos = _read_pred(lines, pos)
        false_node, pos = _read_pred(lines, pos)
        node.splitters.append(SplitterNode(attr, threshold, category,
                                           true_node, false_node))
    return node, pos
