"""The two linear models: logistic regression trained by full-batch gradient
descent, and a linear SVM trained by per-sample subgradient descent on the
L2-regularized hinge objective."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .model import LabeledMatrix, TrainedModel, apply_scaler, check_dim, fit_scaler, sign_to_label

LR_DEFAULTS = {"lr0": 0.1, "epochs": 500, "l2": 1e-4, "tol": 1e-6}
LSVC_DEFAULTS = {"lam": 1e-4, "epochs": 50}


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def lr_objective_grad(w, b, x, y, l2):
    """Mean log-loss plus (l2/2)*||w||^2, with its exact gradient.

    Returns (objective, grad_w, grad_b). Log-loss uses logaddexp for
    stability at large margins.
    """
    margins = y * (x @ w + b)
    obj = float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * l2 * float(w @ w)
    # d/dz log(1+exp(-z)) = -sigmoid(-z)
    coef = -y * sigmoid(-margins)
    grad_w = (x.T @ coef) / x.shape[0] + l2 * w
    grad_b = float(np.mean(coef))
    return obj, grad_w, grad_b


def fit_lr(data: LabeledMatrix, lr0=None, epochs=None, l2=None, tol=None, seed=0,
           standardize=True) -> TrainedModel:
    """Full-batch gradient descent from w=0, b=0 with step lr0/(1+epoch).

    Stops after `epochs` passes or once the gradient infinity-norm drops
    below `tol`.
    """
    cfg = dict(LR_DEFAULTS)
    for name, val in (("lr0", lr0), ("epochs", epochs), ("l2", l2), ("tol", tol)):
        if val is not None:
            cfg[name] = val
    if cfg["lr0"] <= 0:
        raise ValidationError("lr0 must be > 0")
    if cfg["l2"] < 0:
        raise ValidationError("l2 must be >= 0")
    if cfg["epochs"] < 1:
        raise ValidationError("epochs must be >= 1")
    data.require_both_classes()

    scaler = fit_scaler(data) if standardize else None
    x = apply_scaler(scaler, data.x)
    y = data.y.astype(np.float64)
    w = np.zeros(data.d)
    b = 0.0
    for epoch in range(int(cfg["epochs"])):
        _, grad_w, grad_b = lr_objective_grad(w, b, x, y, cfg["l2"])
        if max(np.max(np.abs(grad_w)), abs(grad_b)) < cfg["tol"]:
            break
        step = cfg["lr0"] / (1.0 + epoch)
        w -= step * grad_w
        b -= step * grad_b
    params = {"w": w, "b": float(b)}
    return TrainedModel(kind="LR", d=data.d, params=params, scaler=scaler, seed=seed,
                        train_config=cfg)


def hinge_objective_grad(w, b, x, y, lam):
    """(lam/2)*||w||^2 + mean hinge loss, with the batch (sub)gradient.

    The gradient is exact wherever no margin equals 1; the bias is not
    regularized.
    """
    margins = y * (x @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    obj = 0.5 * lam * float(w @ w) + float(np.mean(hinge))
    active = (margins < 1.0).astype(np.float64)
    coef = -y * active
    grad_w = lam * w + (x.T @ coef) / x.shape[0]
    grad_b = float(np.mean(coef))
    return obj, grad_w, grad_b


def fit_lsvc(data: LabeledMatrix, lam=None, epochs=None, seed=0,
             standardize=True) -> TrainedModel:
    """Per-sample subgradient descent with step 1/(lam*t) over seeded-shuffled
    epochs; the bias is unregularized and moves only on margin violations."""
    cfg = dict(LSVC_DEFAULTS)
    if lam is not None:
        cfg["lam"] = lam
    if epochs is not None:
        cfg["epochs"] = epochs
    if cfg["lam"] <= 0:
        raise ValidationError("lam must be > 0")
    if cfg["epochs"] < 1:
        raise ValidationError("epochs must be >= 1")
    data.require_both_classes()

    scaler = fit_scaler(data) if standardize else None
    x = apply_scaler(scaler, data.x)
    y = data.y.astype(np.float64)
    rng = np.random.default_rng(seed)
    w = np.zeros(data.d)
    b = 0.0
    lam_v = float(cfg["lam"])
    t = 0
    for _ in range(int(cfg["epochs"])):
        order = rng.permutation(data.n)
        for i in order:
            t += 1
            eta = 1.0 / (lam_v * t)
            if y[i] * (x[i] @ w + b) < 1.0:
                w = (1.0 - eta * lam_v) * w + eta * y[i] * x[i]
                b = b + eta * y[i]
            else:
                w = (1.0 - eta * lam_v) * w
    params = {"w": w, "b": float(b)}
    return TrainedModel(kind="LSVC", d=data.d, params=params, scaler=scaler, seed=seed,
                        train_config=cfg)


def _linear_scores(model: TrainedModel, x):
    if model.kind not in ("LR", "LSVC"):
        raise ValidationError(f"predict_linear needs an LR or LSVC model, got {model.kind}")
    x = check_dim(model, x)
    single = x.ndim == 1
    xs = apply_scaler(model.scaler, np.atleast_2d(x))
    scores = xs @ model.params["w"] + model.params["b"]
    return scores, single


def predict_linear(model: TrainedModel, x):
    """Score w.x'+b on the scaled input; positive score means SARCASM, and a
    score of exactly zero falls to NOT_SARCASM."""
    scores, single = _linear_scores(model, x)
    labels = [sign_to_label(1 if s > 0 else -1) for s in scores]
    if single:
        return labels[0], float(scores[0])
    return labels, scores


def lr_probability(model: TrainedModel, x):
    """sigmoid(score): the LR model's SARCASM probability."""
    if model.kind != "LR":
        raise ValidationError("probabilities are only defined for LR models")
    scores, single = _linear_scores(model, x)
    probs = sigmoid(scores)
    return float(probs[0]) if single else probs
