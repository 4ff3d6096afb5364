"""Gaussian naive Bayes with per-class feature Gaussians and a variance
smoothing term proportional to the largest feature variance."""

from __future__ import annotations

import math

import numpy as np

from .model import LabeledMatrix, TrainedModel, check_dim, sign_to_label

SMOOTHING_RATIO = 1e-9
SMOOTHING_MIN = 1e-12  # keeps variances positive when every feature is constant

LOG_2PI = math.log(2.0 * math.pi)


def fit_gnb(data: LabeledMatrix, seed=0) -> TrainedModel:
    """Class priors by frequency; per-class per-feature mean and population
    variance, smoothed by SMOOTHING_RATIO times the largest overall feature
    variance (floored so variances stay positive)."""
    data.require_both_classes()
    eps = max(SMOOTHING_RATIO * float(np.max(data.x.var(axis=0))), SMOOTHING_MIN)
    params = {"eps": eps, "classes": {}}
    n = data.n
    for sign in (1, -1):
        rows = data.x[data.y == sign]
        params["classes"][str(sign)] = {
            "prior": rows.shape[0] / n,
            "mean": rows.mean(axis=0),
            "var": rows.var(axis=0) + eps,
        }
    return TrainedModel(kind="GNB", d=data.d, params=params, scaler=None, seed=seed,
                        train_config={"smoothing_ratio": SMOOTHING_RATIO})


def _log_posteriors(model: TrainedModel, xs: np.ndarray) -> np.ndarray:
    """Unnormalized log posteriors, column 0 for +1 and column 1 for -1."""
    out = np.empty((xs.shape[0], 2))
    for col, sign in enumerate(("1", "-1")):
        cls = model.params["classes"][sign]
        mean = np.asarray(cls["mean"], dtype=np.float64)
        var = np.asarray(cls["var"], dtype=np.float64)
        ll = -0.5 * (LOG_2PI + np.log(var) + (xs - mean) ** 2 / var)
        out[:, col] = math.log(cls["prior"]) + ll.sum(axis=1)
    return out


def predict_gnb(model: TrainedModel, x):
    """Argmax of log prior + Gaussian log likelihoods; exact ties fall to
    NOT_SARCASM. Returns (label, {label: log posterior})."""
    x = check_dim(model, x)
    single = x.ndim == 1
    xs = np.atleast_2d(x)
    logpost = _log_posteriors(model, xs)
    labels = [sign_to_label(1 if lp[0] > lp[1] else -1) for lp in logpost]
    posts = [
        {sign_to_label(1): float(lp[0]), sign_to_label(-1): float(lp[1])} for lp in logpost
    ]
    if single:
        return labels[0], posts[0]
    return labels, posts
