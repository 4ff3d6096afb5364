"""Model persistence: one JSON document per model, keys sorted, floats at
full round-trip precision, so identical models serialize to identical bytes."""

from __future__ import annotations

import json

import numpy as np

from ..errors import FormatError
from .model import KINDS, Scaler, TrainedModel

FORMAT_VERSION = 1


def _to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    return obj


def save_model(model: TrainedModel, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "d": model.d,
        "seed": model.seed,
        "train_config": _to_jsonable(model.train_config),
        "scaler": None
        if model.scaler is None
        else {"mean": _to_jsonable(model.scaler.mean), "std": _to_jsonable(model.scaler.std)},
        "params": _to_jsonable(model.params),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")


def _check_tree(node, d, path):
    if "counts" in node:
        counts = node["counts"]
        if len(counts) != 2 or any(int(c) != c or c < 0 for c in counts):
            raise FormatError(f"{path}: malformed leaf counts {counts!r}")
        return
    if not {"f", "t", "l", "r"} <= node.keys():
        raise FormatError(f"{path}: malformed tree node")
    if not (0 <= node["f"] < d):
        raise FormatError(f"{path}: tree feature index {node['f']} out of range for d={d}")
    _check_tree(node["l"], d, path)
    _check_tree(node["r"], d, path)


def load_model(path) -> TrainedModel:
    """Rebuild a TrainedModel; structural violations raise FormatError."""
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: corrupted model file: {exc.msg}") from exc
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format_version {version!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"{path}: unknown model kind {kind!r}")
    d = doc.get("d")
    if not isinstance(d, int) or d < 1:
        raise FormatError(f"{path}: bad feature length {d!r}")
    params = doc.get("params") or {}

    if kind in ("LR", "LSVC"):
        w = np.asarray(params.get("w", []), dtype=np.float64)
        if w.shape != (d,):
            raise FormatError(f"{path}: weight length {w.shape} does not match d={d}")
        params = {"w": w, "b": float(params.get("b", 0.0))}
    elif kind == "GNB":
        classes = params.get("classes", {})
        if set(classes) != {"1", "-1"}:
            raise FormatError(f"{path}: GNB must store both classes")
        rebuilt = {}
        for sign, cls in classes.items():
            mean = np.asarray(cls["mean"], dtype=np.float64)
            var = np.asarray(cls["var"], dtype=np.float64)
            if mean.shape != (d,) or var.shape != (d,):
                raise FormatError(f"{path}: GNB parameter length does not match d={d}")
            if np.any(var <= 0):
                raise FormatError(f"{path}: GNB variances must be positive")
            rebuilt[sign] = {"prior": float(cls["prior"]), "mean": mean, "var": var}
        params = {"eps": float(params.get("eps", 0.0)), "classes": rebuilt}
    elif kind == "RF":
        trees = params.get("trees")
        if not isinstance(trees, list) or not trees:
            raise FormatError(f"{path}: RF model has no trees")
        for tree in trees:
            _check_tree(tree, d, path)
        params = {"trees": trees, "bootstrap": bool(params.get("bootstrap", True))}

    scaler_doc = doc.get("scaler")
    scaler = None
    if scaler_doc is not None:
        mean = np.asarray(scaler_doc["mean"], dtype=np.float64)
        std = np.asarray(scaler_doc["std"], dtype=np.float64)
        if mean.shape != (d,) or std.shape != (d,):
            raise FormatError(f"{path}: scaler length does not match d={d}")
        if np.any(std <= 0):
            raise FormatError(f"{path}: scaler std must be positive")
        scaler = Scaler(mean=mean, std=std)

    return TrainedModel(
        kind=kind,
        d=d,
        params=params,
        scaler=scaler,
        seed=doc.get("seed"),
        train_config=doc.get("train_config") or {},
    )
