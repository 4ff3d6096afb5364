"""Loading and null-filtering of the shared-task JSONL files.

Training rows carry label/response/context, test rows id/response/context.
Rows with null-ish required fields are dropped (never imputed); the drop
count is kept on the returned Dataset.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import FormatError, ValidationError

SARCASM = "SARCASM"
NOT_SARCASM = "NOT_SARCASM"
LABELS = (SARCASM, NOT_SARCASM)


class Kind(str, Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class Record:
    """One retained dataset row; context turns are earliest-first."""

    response: str
    context: tuple[str, ...]
    label: str | None = None
    id: str | None = None
    line: int = -1  # 0-based line index in the source file

    def key(self, kind: Kind) -> str:
        """Stable key used by precomputed-vector files: t<line> or the test id."""
        if kind is Kind.TRAIN:
            return f"t{self.line}"
        return self.id

    def to_row(self, kind: Kind) -> dict:
        """Back to the file schema (used for lossless re-serialization)."""
        if kind is Kind.TRAIN:
            return {"label": self.label, "response": self.response, "context": list(self.context)}
        return {"id": self.id, "response": self.response, "context": list(self.context)}


@dataclass
class Dataset:
    records: list[Record]
    kind: Kind
    dropped: int = 0
    path: str | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.records)


def _is_null_text(value) -> bool:
    return value is None or (isinstance(value, str) and not value.strip())


def _row_is_null(row: dict, kind: Kind) -> bool:
    """True when the row must be dropped under the delete-the-row policy."""
    if _is_null_text(row.get("response")):
        return True
    context = row.get("context")
    if context is None:
        return True
    if isinstance(context, list) and any(_is_null_text(turn) for turn in context):
        return True
    if kind is Kind.TRAIN:
        return row.get("label") is None
    return _is_null_text(row.get("id"))


def _validate_row(row: dict, kind: Kind, where: str) -> None:
    if not isinstance(row, dict):
        raise ValidationError(f"{where}: expected a JSON object, got {type(row).__name__}")
    response = row.get("response")
    if response is not None and not isinstance(response, str):
        raise ValidationError(f"{where}: response must be a string")
    context = row.get("context")
    if context is not None and not isinstance(context, list):
        raise ValidationError(f"{where}: context must be a list of strings")
    if isinstance(context, list):
        for turn in context:
            if turn is not None and not isinstance(turn, str):
                raise ValidationError(f"{where}: context turns must be strings")
    if kind is Kind.TRAIN:
        label = row.get("label")
        if label is not None and label not in LABELS:
            raise ValidationError(f"{where}: unknown label {label!r}")
    else:
        rid = row.get("id")
        if rid is not None and not isinstance(rid, str):
            raise ValidationError(f"{where}: id must be a string")


def drop_null_rows(rows: list[dict], kind: Kind = Kind.TRAIN) -> tuple[list[dict], int]:
    """Split raw rows into (retained, dropped_count); no imputation ever."""
    retained = [r for r in rows if not _row_is_null(r, kind)]
    return retained, len(rows) - len(retained)


def load_dataset(path, kind: Kind) -> Dataset:
    """Parse a JSONL file into retained Records, in file order.

    Raises FormatError with the 1-based line number on malformed JSON and
    ValidationError on schema violations (e.g. an unknown label string).
    """
    records = []
    dropped = 0
    with open(path, encoding="utf-8") as f:
        for idx, raw in enumerate(f):
            if not raw.strip():
                continue
            try:
                row = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: line {idx + 1}: invalid JSON: {exc.msg}") from exc
            _validate_row(row, kind, f"{path}: line {idx + 1}")
            if _row_is_null(row, kind):
                dropped += 1
                continue
            records.append(
                Record(
                    response=row["response"],
                    context=tuple(row["context"]),
                    label=row.get("label") if kind is Kind.TRAIN else None,
                    id=row.get("id") if kind is Kind.TEST else None,
                    line=idx,
                )
            )
    return Dataset(records=records, kind=kind, dropped=dropped, path=str(path))
