"""Independent brute-force oracles used to pin expected values.

These deliberately avoid the library's vectorized/compiled code paths:
plain Python loops and the textbook formulas only.
"""

import math

import numpy as np


def entropy_bits(weights):
    total = float(sum(weights))
    h = 0.0
    for w in weights:
        if w > 0:
            p = w / total
            h -= p * math.log2(p)
    return h


def info_gain_brute(parent, children):
    total = float(sum(parent))
    g = entropy_bits(parent)
    for c in children:
        ct = float(sum(c))
        if ct > 0:
            g -= (ct / total) * entropy_bits(c)
    return g


def lad_candidate_gain(x, members, z, w, attribute, threshold=None, category=None):
    """Gain of one (host, test) pair: sum_k sum_branch (S_wz)^2 / S_w.

    Missing values put an instance in both branches, matching score().
    """
    k = len(z[0])
    t_idx, f_idx = [], []
    for i in range(len(members)):
        if not members[i]:
            continue
        v = x[i][attribute]
        if v is None or (isinstance(v, float) and math.isnan(v)):
            t_idx.append(i)
            f_idx.append(i)
        elif (threshold is not None and v <= threshold) or \
             (category is not None and v == category):
            t_idx.append(i)
        else:
            f_idx.append(i)
    gain = 0.0
    for branch in (t_idx, f_idx):
        for j in range(k):
            sw = sum(w[i][j] for i in branch)
            sz = sum(w[i][j] * z[i][j] for i in branch)
            if sw > 0:
                gain += sz * sz / sw
    return gain


def lad_brute_force_winner(x, hosts_members, z, w, categories):
    """Exhaustive scan over every (host, test); returns the winner tuple
    (host_index, attribute, threshold, category, gain) under the library's
    tie-break order (host, attribute, candidate order; strict improvement)."""
    best = None
    for h, members in enumerate(hosts_members):
        if not any(members):
            continue
        for a, cats in enumerate(categories):
            if cats is None:
                vals = sorted({x[i][a] for i in range(len(members))
                               if members[i] and x[i][a] is not None})
                mids = [(vals[i] + vals[i + 1]) / 2.0 for i in range(len(vals) - 1)]
                for thr in mids:
                    g = lad_candidate_gain(x, members, z, w, a, threshold=thr)
                    if best is None or g > best[4]:
                        best = (h, a, thr, None, g)
            else:
                for c in range(cats):
                    g = lad_candidate_gain(x, members, z, w, a, category=c)
                    if best is None or g > best[4]:
                        best = (h, a, None, c, g)
    return best


def tree_predict_label(node, values):
    """Route a fully-observed instance to a leaf; majority training class."""
    while not node.is_leaf:
        v = values[node.attribute]
        if node.threshold is None:
            node = node.children[int(v)]
        else:
            node = node.children[0 if v <= node.threshold else 1]
    return int(np.argmax(node.dist))


def tree_error_weight(node, dataset):
    """Misclassification weight of fully-observed labeled instances."""
    err = 0.0
    for inst in dataset.instances:
        if inst.class_index is None:
            continue
        if tree_predict_label(node, inst.values) != inst.class_index:
            err += inst.weight
    return err


def log_loss(probabilities, labels):
    eps = 1e-12
    return float(np.mean([-math.log(max(probabilities[i][labels[i]], eps))
                          for i in range(len(labels))]))
