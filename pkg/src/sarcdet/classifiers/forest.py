"""Random forest: CART trees grown on seeded bootstrap samples with per-node
feature subsampling and Gini-based splits.

Determinism contract: all randomness derives from SeedSequence(seed) spawned
into one independent stream per tree, so results are identical whether trees
are grown sequentially or in parallel. Trees are grown depth-first, left
child before right.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ValidationError
from .model import LabeledMatrix, TrainedModel, check_dim, sign_to_label

RF_DEFAULTS = {"n_trees": 100, "max_depth": None, "min_leaf": 1, "seed": 42}


def _gini(n_pos: int, n_neg: int) -> float:
    n = n_pos + n_neg
    if n == 0:
        return 0.0
    p = n_pos / n
    q = n_neg / n
    return 1.0 - p * p - q * q


def _leaf(y: np.ndarray) -> dict:
    return {"counts": [int(np.sum(y == -1)), int(np.sum(y == 1))]}


def _best_split(x, y, features, min_leaf):
    """Scan candidate (feature, midpoint threshold) pairs in ascending feature
    then threshold order; return the first pair with the strictly largest
    Gini decrease, or None when nothing reduces impurity."""
    n = y.shape[0]
    parent = _gini(int(np.sum(y == 1)), int(np.sum(y == -1)))
    best = None
    best_decrease = 0.0
    for f in features:
        col = x[:, f]
        values = np.unique(col)
        if values.shape[0] < 2:
            continue
        for lo, hi in zip(values[:-1], values[1:]):
            thr = (lo + hi) / 2.0
            left = col <= thr
            n_left = int(np.sum(left))
            n_right = n - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            yl = y[left]
            yr = y[~left]
            child = (
                n_left * _gini(int(np.sum(yl == 1)), int(np.sum(yl == -1)))
                + n_right * _gini(int(np.sum(yr == 1)), int(np.sum(yr == -1)))
            ) / n
            decrease = parent - child
            if decrease > best_decrease:
                best_decrease = decrease
                best = (int(f), float(thr))
    return best


def _grow_tree(x, y, rng, mtry, max_depth, min_leaf, depth=0):
    """CART recursion. The sampled feature subset is sorted ascending so the
    split search order does not depend on the draw order."""
    if np.all(y == y[0]) or (max_depth is not None and depth >= max_depth) or y.shape[0] < 2 * min_leaf:
        return _leaf(y)
    d = x.shape[1]
    if mtry >= d:
        features = np.arange(d)
    else:
        features = np.sort(rng.choice(d, size=mtry, replace=False))
    split = _best_split(x, y, features, min_leaf)
    if split is None:
        return _leaf(y)
    f, thr = split
    left = x[:, f] <= thr
    return {
        "f": f,
        "t": thr,
        "l": _grow_tree(x[left], y[left], rng, mtry, max_depth, min_leaf, depth + 1),
        "r": _grow_tree(x[~left], y[~left], rng, mtry, max_depth, min_leaf, depth + 1),
    }


def _fit_forest(x, y, n_trees, max_depth, min_leaf, mtry, seed, bootstrap=True):
    """Internal entry point; also used by tests to disable bootstrapping or
    to fit single-class data."""
    n = x.shape[0]
    streams = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    for ss in streams:
        rng = np.random.default_rng(ss)
        if bootstrap:
            idx = rng.integers(0, n, size=n)
        else:
            idx = np.arange(n)
        trees.append(_grow_tree(x[idx], y[idx], rng, mtry, max_depth, min_leaf))
    return trees


def fit_rf(data: LabeledMatrix, n_trees=None, max_depth=None, min_leaf=None, mtry=None,
           seed=None, bootstrap=True) -> TrainedModel:
    cfg = dict(RF_DEFAULTS)
    if n_trees is not None:
        cfg["n_trees"] = int(n_trees)
    if max_depth is not None:
        cfg["max_depth"] = int(max_depth)
    if min_leaf is not None:
        cfg["min_leaf"] = int(min_leaf)
    if seed is not None:
        cfg["seed"] = int(seed)
    cfg["mtry"] = int(mtry) if mtry is not None else max(1, int(math.isqrt(data.d)))
    if cfg["n_trees"] < 1:
        raise ValidationError("n_trees must be >= 1")
    if not (1 <= cfg["mtry"] <= data.d):
        raise ValidationError(f"mtry must be in [1, {data.d}]")
    if cfg["min_leaf"] < 1:
        raise ValidationError("min_leaf must be >= 1")
    if cfg["max_depth"] is not None and cfg["max_depth"] < 0:
        raise ValidationError("max_depth must be >= 0")
    data.require_both_classes()
    trees = _fit_forest(
        data.x, data.y, cfg["n_trees"], cfg["max_depth"], cfg["min_leaf"], cfg["mtry"],
        cfg["seed"], bootstrap=bootstrap,
    )
    params = {"trees": trees, "bootstrap": bool(bootstrap)}
    return TrainedModel(kind="RF", d=data.d, params=params, scaler=None, seed=cfg["seed"],
                        train_config=cfg)


def _tree_vote(tree: dict, row: np.ndarray) -> int:
    node = tree
    while "f" in node:
        node = node["l"] if row[node["f"]] <= node["t"] else node["r"]
    n_neg, n_pos = node["counts"]
    return 1 if n_pos > n_neg else -1


def predict_rf(model: TrainedModel, x):
    """Majority vote over trees; returns (label, fraction of SARCASM votes).
    A fraction of exactly one half falls to NOT_SARCASM."""
    x = check_dim(model, x)
    single = x.ndim == 1
    xs = np.atleast_2d(x)
    trees = model.params["trees"]
    labels = []
    fractions = []
    for row in xs:
        votes = sum(1 for tree in trees if _tree_vote(tree, row) == 1)
        frac = votes / len(trees)
        fractions.append(frac)
        labels.append(sign_to_label(1 if frac > 0.5 else -1))
    if single:
        return labels[0], fractions[0]
    return labels, fractions
