"""Confusion counts, precision/recall/F-measure, and the two-layout ablation
grid. SARCASM is the positive class for the headline figure; macro-F1 is
always reported beside it."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import LABELS, NOT_SARCASM, SARCASM
from .errors import ValidationError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass
class EvalReport:
    per_class: dict  # label -> {"precision", "recall", "f1"}
    macro_f1: float
    accuracy: float
    counts: ConfusionMatrix
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "per_class": {k: dict(v) for k, v in self.per_class.items()},
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "counts": {
                "tp": self.counts.tp,
                "fp": self.counts.fp,
                "fn": self.counts.fn,
                "tn": self.counts.tn,
            },
            "warnings": list(self.warnings),
        }


def confusion(predictions, truths) -> ConfusionMatrix:
    """Counts with SARCASM as the positive class."""
    if len(predictions) != len(truths):
        raise ValidationError(
            f"predictions ({len(predictions)}) and truths ({len(truths)}) differ in length"
        )
    if not predictions:
        raise ValidationError("nothing to evaluate")
    tp = fp = fn = tn = 0
    for pred, truth in zip(predictions, truths):
        if pred not in LABELS or truth not in LABELS:
            raise ValidationError(f"unknown label in pair ({pred!r}, {truth!r})")
        if truth == SARCASM:
            if pred == SARCASM:
                tp += 1
            else:
                fn += 1
        else:
            if pred == SARCASM:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _prf(tp: int, fp: int, fn: int, label: str, warnings_out: list) -> dict:
    if tp + fp == 0:
        warnings_out.append(f"{label}: no predicted positives, precision set to 0")
        precision = 0.0
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        warnings_out.append(f"{label}: no true positives in reference, recall set to 0")
        recall = 0.0
    else:
        recall = tp / (tp + fn)
    return {"precision": precision, "recall": recall, "f1": f_measure(precision, recall)}


def report(predictions, truths) -> EvalReport:
    """Per-class metrics with each class treated as positive in turn."""
    counts = confusion(predictions, truths)
    warns = []
    per_class = {
        SARCASM: _prf(counts.tp, counts.fp, counts.fn, SARCASM, warns),
        # swapping the positive class swaps tp<->tn and fp<->fn
        NOT_SARCASM: _prf(counts.tn, counts.fn, counts.fp, NOT_SARCASM, warns),
    }
    macro = (per_class[SARCASM]["f1"] + per_class[NOT_SARCASM]["f1"]) / 2.0
    accuracy = (counts.tp + counts.tn) / counts.total
    return EvalReport(
        per_class=per_class, macro_f1=macro, accuracy=accuracy, counts=counts, warnings=warns
    )


def render_report(rep: EvalReport) -> str:
    lines = [
        f"{'class':<13} {'precision':>9} {'recall':>9} {'f1':>9}",
    ]
    for label in (SARCASM, NOT_SARCASM):
        row = rep.per_class[label]
        lines.append(
            f"{label:<13} {row['precision']:>9.4f} {row['recall']:>9.4f} {row['f1']:>9.4f}"
        )
    lines.append(f"{'macro-f1':<13} {'':>9} {'':>9} {rep.macro_f1:>9.4f}")
    lines.append(f"{'accuracy':<13} {'':>9} {'':>9} {rep.accuracy:>9.4f}")
    c = rep.counts
    lines.append(f"counts: tp={c.tp} fp={c.fp} fn={c.fn} tn={c.tn}")
    for warning in rep.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)


def render_grid(grid: dict, headline: str = "f1") -> str:
    """Aligned text table for the ablation grid.

    grid maps classifier name -> layout name -> EvalReport.
    """
    layouts = []
    for rows in grid.values():
        for layout in rows:
            if layout not in layouts:
                layouts.append(layout)
    header = f"{'classifier':<12}" + "".join(f" {layout:>22}" for layout in layouts)
    lines = [header, "-" * len(header)]
    for name, rows in grid.items():
        cells = []
        for layout in layouts:
            rep = rows.get(layout)
            if rep is None:
                cells.append(f" {'-':>22}")
            else:
                f1 = rep.per_class[SARCASM]["f1"]
                cells.append(f" {f1:.4f} (m {rep.macro_f1:.4f})".rjust(23))
        lines.append(f"{name:<12}" + "".join(cells))
    return "\n".join(lines)
