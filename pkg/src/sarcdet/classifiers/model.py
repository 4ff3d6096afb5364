"""Shared classifier plumbing: labeled matrices, feature scaling, and the
serializable trained-model container.

Labels are +1 (SARCASM) / -1 (NOT_SARCASM) internally. Every exact tie in any
decision resolves to NOT_SARCASM.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import NOT_SARCASM, SARCASM
from ..errors import ValidationError

STD_FLOOR = 1e-8

KINDS = ("LR", "LSVC", "GNB", "RF")


def label_to_sign(label: str) -> int:
    if label == SARCASM:
        return 1
    if label == NOT_SARCASM:
        return -1
    raise ValidationError(f"unknown label {label!r}")


def sign_to_label(sign: int) -> str:
    return SARCASM if sign > 0 else NOT_SARCASM


@dataclass
class LabeledMatrix:
    """Training rows (n, d) with aligned +1/-1 labels."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.x.ndim != 2 or self.x.shape[0] == 0:
            raise ValidationError("x must be a nonempty 2-D matrix")
        if self.y.shape != (self.x.shape[0],):
            raise ValidationError("labels must align with rows")
        if not np.all(np.isin(self.y, (-1, 1))):
            raise ValidationError("labels must be +1 or -1")
        if not np.all(np.isfinite(self.x)):
            raise ValidationError("features must be finite")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def require_both_classes(self):
        if not (np.any(self.y == 1) and np.any(self.y == -1)):
            raise ValidationError("training data must contain both classes")


@dataclass
class Scaler:
    mean: np.ndarray
    std: np.ndarray  # floored at STD_FLOOR, never zero


def fit_scaler(data: LabeledMatrix) -> Scaler:
    """Per-feature mean and population standard deviation over training rows."""
    mean = data.x.mean(axis=0)
    std = data.x.std(axis=0)
    std = np.maximum(std, STD_FLOOR)
    return Scaler(mean=mean, std=std)


def apply_scaler(scaler: Scaler | None, x: np.ndarray) -> np.ndarray:
    if scaler is None:
        return np.asarray(x, dtype=np.float64)
    return (np.asarray(x, dtype=np.float64) - scaler.mean) / scaler.std


@dataclass
class TrainedModel:
    kind: str  # one of KINDS
    d: int
    params: dict
    scaler: Scaler | None = None
    seed: int | None = None
    train_config: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown model kind {self.kind!r}")


def check_dim(model: TrainedModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    width = x.shape[-1] if x.ndim else -1
    if x.ndim not in (1, 2) or width != model.d:
        raise ValidationError(f"expected d={model.d}, got {width}")
    return x
