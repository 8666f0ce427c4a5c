"""REP Tree: information-gain growth, reduced-error pruning, backfitting.

The tree is grown greedily on an internal grow set, pruned bottom-up against
a held-out stratified fold, and its node statistics are then re-estimated by
routing the full training data through the fixed structure. Missing values
are handled C4.5-style: instances are split into fractional pieces routed to
every child in proportion to the known-value branch weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dataset import schema_from_dict, schema_to_dict, split_grow_prune

MODEL_FORMAT = "REPTREE 1"


@dataclass(frozen=True)
class GrowParams:
    min_instances: float = 2.0
    max_depth: int | None = None  # None = unlimited
    prune_folds: int = 3
    do_prune: bool = True
    seed: int = 1

    def __post_init__(self):
        if self.min_instances <= 0:
            raise ValueError("min_instances must be positive")
        if self.do_prune and self.prune_folds < 2:
            raise ValueError("prune_folds must be >= 2 when pruning")


class RepNode:
    """Internal split node or leaf. Leaves have children=None."""

    __slots__ = ("attribute", "threshold", "children", "dist", "branch_weights")

    def __init__(self, dist, attribute=None, threshold=None, children=None,
                 branch_weights=None):
        self.dist = dist
        self.attribute = attribute
        self.threshold = threshold  # None for nominal multiway splits
        self.children = children
        self.branch_weights = branch_weights

    @property
    def is_leaf(self):
        return self.children is None

    def make_leaf(self):
        self.attribute = None
        self.threshold = None
        self.children = None
        self.branch_weights = None

    def n_nodes(self):
        if self.is_leaf:
            return 1
        return 1 + sum(c.n_nodes() for c in self.children)


def _wbincount(classes, weights, k):
    # np.bincount yields int64 when the weights array is empty
    return np.bincount(classes, weights=weights, minlength=k).astype(float)


def entropy(class_weights):
    """Entropy in bits of a per-class weight vector."""
    w = np.asarray(class_weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("negative class weight")
    total = w.sum()
    if total <= 0:
        raise ValueError("all class weights are zero")
    p = w[w > 0] / total
    return float(-(p * np.log2(p)).sum())


def info_gain(parent_weights, children_weights):
    """Entropy reduction of a split; children must sum to the parent."""
    parent = np.asarray(parent_weights, dtype=float)
    children = [np.asarray(c, dtype=float) for c in children_weights]
    recon = np.sum(children, axis=0)
    if not np.allclose(recon, parent, rtol=1e-6, atol=1e-9):
        raise ValueError("children weights do not sum to parent weights")
    total = parent.sum()
    gain = entropy(parent)
    for c in children:
        ct = c.sum()
        if ct > 0:
            gain -= (ct / total) * entropy(c)
    return float(gain)


@dataclass
class SplitCandidate:
    attribute: int
    threshold: float | None  # None = nominal multiway
    gain: float
    child_totals: np.ndarray  # training weight per child, missing included
    child_dists: list = field(default=None)  # per-child class weights (nominal only)


def best_split(values, classes, weights, n_classes, categories, min_instances=2.0,
               attribute=0):
    """Best split of one attribute column over a weighted instance subset.

    values: attribute column (NaN = missing); classes/weights aligned.
    categories: number of categories for a nominal attribute, None if numeric.
    Returns a SplitCandidate or None. For an impure subset, a legal zero-gain
    candidate is still returned (parity-style concepts need it); None means
    no legal candidate exists or the subset is pure.
    """
    values = np.asarray(values, dtype=float)
    classes = np.asarray(classes)
    weights = np.asarray(weights, dtype=float)
    parent = _wbincount(classes, weights, n_classes)
    if parent.sum() <= 0 or entropy(parent) <= 0:
        return None

    known = ~np.isnan(values)
    miss_cw = _wbincount(classes[~known], weights[~known], n_classes)
    if not known.any():
        return None

    if categories is not None:
        vals = values[known].astype(np.int64)
        child_known = np.zeros((categories, n_classes))
        np.add.at(child_known, (vals, classes[known]), weights[known])
        known_totals = child_known.sum(axis=1)
        known_total = known_totals.sum()
        frac = known_totals / known_total
        child = child_known + frac[:, None] * miss_cw
        child_totals = child.sum(axis=1)
        if (child_totals >= min_instances).sum() < 2:
            return None
        gain = info_gain(parent, child)
        return SplitCandidate(attribute, None, max(gain, 0.0), child_totals,
                              list(child))

    order = np.argsort(values[known], kind="stable")
    vs = np.ascontiguousarray(values[known][order])
    cs = np.ascontiguousarray(classes[known][order], dtype=np.int64)
    ws = np.ascontiguousarray(weights[known][order])
    thresholds, gains, lts, rts = _kernels.rep_numeric_scan(vs, cs, ws, miss_cw)
    if len(thresholds) == 0:
        return None
    legal = (lts >= min_instances) & (rts >= min_instances)
    if not legal.any():
        return None
    gains = np.where(legal, gains, -np.inf)
    best = int(np.argmax(gains))  # first max: smallest threshold wins ties
    totals = np.array([lts[best], rts[best]])
    return SplitCandidate(attribute, float(thresholds[best]),
                          max(float(gains[best]), 0.0), totals)


class _GrowContext:
    def __init__(self, schema, params):
        self.n_classes = schema.n_classes
        self.categories = [len(a.categories) if a.is_nominal else None
                           for a in schema.attributes]
        self.params = params


def _grow(x, y, w, idx, iw, depth, ctx):
    k = ctx.n_classes
    dist = _wbincount(y[idx], iw, k)
    node = RepNode(dist)
    total = dist.sum()
    p = ctx.params
    if (total < 2 * p.min_instances
            or entropy_or_zero(dist) <= 0
            or (p.max_depth is not None and depth >= p.max_depth)):
        return node

    best = None
    for a in range(x.shape[1]):
        cand = best_split(x[idx, a], y[idx], iw, k, ctx.categories[a],
                          p.min_instances, attribute=a)
        if cand is not None and (best is None or cand.gain > best.gain):
            best = cand
    if best is None:
        return node

    col = x[idx, best.attribute]
    known = ~np.isnan(col)
    known_idx, known_w = idx[known], iw[known]
    miss_idx, miss_w = idx[~known], iw[~known]
    if best.threshold is None:
        branch_masks = [known & (col == c)
                        for c in range(ctx.categories[best.attribute])]
    else:
        branch_masks = [known & (col <= best.threshold),
                        known & (col > best.threshold)]
    known_totals = np.array([iw[m].sum() for m in branch_masks])
    known_total = known_totals.sum()
    fracs = known_totals / known_total if known_total > 0 else None

    node.attribute = best.attribute
    node.threshold = best.threshold
    node.children = []
    node.branch_weights = best.child_totals.copy()
    for b, mask in enumerate(branch_masks):
        child_idx = idx[mask]
        child_w = iw[mask]
        if len(miss_idx) and fracs is not None and fracs[b] > 0:
            child_idx = np.concatenate([child_idx, miss_idx])
            child_w = np.concatenate([child_w, miss_w * fracs[b]])
        if len(child_idx) == 0:
            node.children.append(RepNode(np.zeros(k)))
        else:
            node.children.append(_grow(x, y, w, child_idx, child_w, depth + 1, ctx))
    return node


def entropy_or_zero(dist):
    return entropy(dist) if dist.sum() > 0 else 0.0


def grow_tree(grow_set, params=None):
    """Grow an unpruned tree on a dataset (instances with a class label)."""
    params = params or GrowParams()
    x, y, w = grow_set.matrix
    labeled = y >= 0
    idx = np.nonzero(labeled)[0]
    if len(idx) == 0:
        raise ValueError("no labeled instances to grow on")
    ctx = _GrowContext(grow_set.schema, params)
    return _grow(x, y, w, idx, w[idx].copy(), 0, ctx)


def _route(node, x, idx, w):
    """Split (idx, w) among children; missing values fan out fractionally."""
    col = x[idx, node.attribute]
    known = ~np.isnan(col)
    if node.threshold is None:
        branch_masks = [known & (col == c) for c in range(len(node.children))]
    else:
        branch_masks = [known & (col <= node.threshold),
                        known & (col > node.threshold)]
    bw = node.branch_weights
    s = bw.sum()
    props = bw / s if s > 0 else np.full(len(bw), 1.0 / len(bw))
    out = []
    miss = ~known
    has_miss = miss.any()
    for mask, p in zip(branch_masks, props):
        child_idx, child_w = idx[mask], w[mask]
        if has_miss and p > 0:
            child_idx = np.concatenate([child_idx, idx[miss]])
            child_w = np.concatenate([child_w, w[miss] * p])
        out.append((child_idx, child_w))
    return out


def _prune(node, x, y, idx, w, k):
    reach = _wbincount(y[idx], w, k) if len(idx) else np.zeros(k)
    majority = int(np.argmax(node.dist))
    leaf_error = reach.sum() - reach[majority]
    if node.is_leaf:
        return leaf_error
    subtree_error = 0.0
    for child, (cidx, cw) in zip(node.children, _route(node, x, idx, w)):
        subtree_error += _prune(child, x, y, cidx, cw, k)
    if leaf_error <= subtree_error + 1e-10:
        node.make_leaf()
        return leaf_error
    return subtree_error


def prune_tree(root, prune_set):
    """Reduced-error pruning: collapse a subtree whenever the replacement
    leaf's held-out misclassification weight does not exceed the subtree's.
    Ties collapse (prefer the smaller tree). Returns the same root, mutated.
    """
    x, y, w = prune_set.matrix
    idx = np.nonzero(y >= 0)[0]
    k = root.dist.shape[0]
    _prune(root, x, y, idx, w[idx].copy(), k)
    return root


def _backfit(node, x, y, idx, w, k):
    node.dist = _wbincount(y[idx], w, k) if len(idx) else np.zeros(k)
    if node.is_leaf:
        return
    col = x[idx, node.attribute]
    known = ~np.isnan(col)
    if node.threshold is None:
        branch_masks = [known & (col == c) for c in range(len(node.children))]
    else:
        branch_masks = [known & (col <= node.threshold),
                        known & (col > node.threshold)]
    known_totals = np.array([w[m].sum() for m in branch_masks])
    known_total = known_totals.sum()
    if known_total > 0:
        props = known_totals / known_total
    else:
        old = node.branch_weights
        props = old / old.sum() if old.sum() > 0 else np.full(len(old), 1 / len(old))
    miss = ~known
    miss_total = w[miss].sum()
    node.branch_weights = known_totals + props * miss_total
    for b, (child, mask) in enumerate(zip(node.children, branch_masks)):
        cidx, cw = idx[mask], w[mask]
        if miss.any() and props[b] > 0:
            cidx = np.concatenate([cidx, idx[miss]])
            cw = np.concatenate([cw, w[miss] * props[b]])
        _backfit(child, x, y, cidx, cw, k)


def backfit(root, full_train):
    """Re-estimate every node's statistics from the full training data,
    keeping the pruned structure fixed. Returns the same root, mutated."""
    x, y, w = full_train.matrix
    idx = np.nonzero(y >= 0)[0]
    k = full_train.schema.n_classes
    _backfit(root, x, y, idx, w[idx].copy(), k)
    return root


@dataclass
class RepTreeModel:
    root: RepNode
    schema: object
    params: GrowParams

    def predict_matrix(self, x):
        """Per-class probabilities for every row of x (NaN = missing)."""
        n = x.shape[0]
        k = self.schema.n_classes
        out = np.zeros((n, k))
        uniform = np.full(k, 1.0 / k)
        _accumulate(self.root, x, np.arange(n), np.ones(n), out, uniform, k)
        return out

    def predict_distribution(self, instance):
        row = _instance_row(instance, self.schema)
        return self.predict_matrix(row[None, :])[0]

    def to_text(self):
        lines = [MODEL_FORMAT,
                 "schema %s" % json.dumps(schema_to_dict(self.schema), sort_keys=True),
                 "params %s" % json.dumps({
                     "min_instances": self.params.min_instances,
                     "max_depth": self.params.max_depth,
                     "prune_folds": self.params.prune_folds,
                     "do_prune": self.params.do_prune,
                     "seed": self.params.seed}, sort_keys=True)]
        _write_node(self.root, lines, 0)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        if not lines or lines[0] != MODEL_FORMAT:
            raise ValueError("not a %s model file" % MODEL_FORMAT)
        schema = schema_from_dict(json.loads(lines[1].split(" ", 1)[1]))
        p = json.loads(lines[2].split(" ", 1)[1])
        params = GrowParams(p["min_instances"], p["max_depth"], p["prune_folds"],
                            p["do_prune"], p["seed"])
        root, _ = _read_node(lines, 3, 0)
        return cls(root, schema, params)


def _instance_row(instance, schema):
    values = instance.values if hasattr(instance, "values") else instance
    row = np.full(len(schema.attributes), np.nan)
    for j, v in enumerate(values):
        if v is not None:
            row[j] = v
    return row


def _laplace(dist, k):
    return (dist + 1.0) / (dist.sum() + k)


def _accumulate(node, x, idx, frac, out, fallback, k):
    if node.is_leaf:
        d = _laplace(node.dist, k) if node.dist.sum() > 0 else fallback
        out[idx] += frac[:, None] * d
        return
    here = _laplace(node.dist, k) if node.dist.sum() > 0 else fallback
    col = x[idx, node.attribute]
    known = ~np.isnan(col)
    if node.threshold is None:
        branch_masks = [known & (col == c) for c in range(len(node.children))]
    else:
        branch_masks = [known & (col <= node.threshold),
                        known & (col > node.threshold)]
    bw = node.branch_weights
    s = bw.sum()
    props = bw / s if s > 0 else np.full(len(bw), 1.0 / len(bw))
    miss = ~known
    has_miss = miss.any()
    for child, mask, p in zip(node.children, branch_masks, props):
        if mask.any():
            _accumulate(child, x, idx[mask], frac[mask], out, here, k)
        if has_miss and p > 0:
            _accumulate(child, x, idx[miss], frac[miss] * p, out, here, k)


def _fmt_array(a):
    return ",".join(repr(float(v)) for v in a)


def _parse_array(s):
    return np.array([float(v) for v in s.split(",")]) if s else np.empty(0)


def _write_node(node, lines, depth):
    pad = "  " * depth
    if node.is_leaf:
        lines.append("%sleaf dist=%s" % (pad, _fmt_array(node.dist)))
        return
    test = ("nominal" if node.threshold is None
            else "numeric<=%s" % repr(float(node.threshold)))
    lines.append("%ssplit attr=%d %s weights=%s dist=%s"
                 % (pad, node.attribute, test, _fmt_array(node.branch_weights),
                    _fmt_array(node.dist)))
    for child in node.children:
        _write_node(child, lines, depth + 1)


def _read_node(lines, pos, depth):
    line = lines[pos]
    body = line.strip()
    fields = dict(tok.split("=", 1) for tok in body.split(" ")[1:] if "=" in tok)
    if body.startswith("leaf"):
        return RepNode(_parse_array(fields["dist"])), pos + 1
    kind = body.split(" ")[2]
    threshold = None if kind == "nominal" else float(kind.split("<=", 1)[1])
    branch_weights = _parse_array(fields["weights"])
    node = RepNode(_parse_array(fields["dist"]), attribute=int(fields["attr"]),
                   threshold=threshold, children=[], branch_weights=branch_weights)
    pos += 1
    for _ in range(len(branch_weights)):
        child, pos = _read_node(lines, pos, depth + 1)
        node.children.append(child)
    return node, pos


def train_reptree(train, params=None):
    """Full pipeline: stratified grow/prune split, grow, prune, backfit.

    With do_prune=False the tree is grown on the full training data and left
    unpruned. Deterministic for fixed (instance order, params).
    """
    params = params or GrowParams()
    if len(train) == 0:
        raise ValueError("empty training set")
    labeled_idx = [i for i, inst in enumerate(train.instances)
                   if inst.class_index is not None]
    labeled = train.subset(labeled_idx)
    if not params.do_prune:
        root = grow_tree(labeled, params)
        return RepTreeModel(root, train.schema, params)
    grow_set, prune_set = split_grow_prune(labeled, params.prune_folds, params.seed)
    root = grow_tree(grow_set, params)
    prune_tree(root, prune_set)
    backfit(root, labeled)
    return RepTreeModel(root, train.schema, params)
