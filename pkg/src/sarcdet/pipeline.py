"""Batch workflow behind the CLI: featurize records from either vector
source, split with a seeded shuffle, fit, evaluate, and run the two-layout
ablation grid. All randomness flows from the single run seed."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .classifiers import (
    LabeledMatrix,
    fit_gnb,
    fit_lr,
    fit_lsvc,
    fit_rf,
    label_to_sign,
    load_model,
    predict_gnb,
    predict_linear,
    predict_rf,
    save_model,
    sign_to_label,
)
from .dataset import SARCASM, Dataset, Kind, load_dataset
from .embeddings import (
    EmbedStats,
    Layout,
    Mode,
    PrecomputedStore,
    embed_context,
    embed_sentence,
    load_glove,
    load_precomputed,
    make_feature,
    save_features,
)
from .errors import ValidationError
from .evaluation import EvalReport, render_grid, render_report, report
from .preprocess import default_config, preprocess_text

MODEL_KEYS = ("lr", "lsvc", "gnb", "rf")
KIND_BY_KEY = {"lr": "LR", "lsvc": "LSVC", "gnb": "GNB", "rf": "RF"}
LAYOUT_BY_FLAG = {"both": Layout.CONTEXT_THEN_RESPONSE, "response": Layout.RESPONSE_ONLY}
FLAG_BY_LAYOUT = {v: k for k, v in LAYOUT_BY_FLAG.items()}


def bundled_path(name: str):
    """Path to a data file shipped inside the package."""
    return resources.files("sarcdet").joinpath("data", name)


def smoke_paths() -> dict:
    """The bundled 40-record synthetic dataset and its vector table."""
    return {
        "train": bundled_path("smoke_train.jsonl"),
        "test": bundled_path("smoke_test.jsonl"),
        "glove": bundled_path("smoke_vectors.txt"),
    }


@dataclass
class RunConfig:
    train_file: str | None = None
    test_file: str | None = None
    glove: str | None = None
    precomputed: str | None = None
    layout: str = "both"  # "both" (context then response) or "response"
    model: str = "lr"
    seed: int = 42
    holdout: float = 0.2
    folds: int | None = None
    out: str | None = None
    stopwords: str | None = None
    slang: str | None = None
    emoticons: str | None = None
    bert_mode: str | None = None  # "pooled" | "sequence"; checked against the file header
    seq_len: int | None = None
    hyper: dict = field(default_factory=dict)

    def validate(self, need_source: bool = True) -> None:
        if need_source:
            if (self.glove is None) == (self.precomputed is None):
                raise ValidationError("exactly one of --glove or --precomputed must be set")
        if self.layout not in LAYOUT_BY_FLAG:
            raise ValidationError(f"layout must be one of {sorted(LAYOUT_BY_FLAG)}")
        if self.model not in MODEL_KEYS:
            raise ValidationError(f"model must be one of {MODEL_KEYS}")
        if self.folds is not None:
            if self.folds < 2:
                raise ValidationError("folds must be >= 2")
        elif not (0.0 < self.holdout < 1.0):
            raise ValidationError("holdout fraction must be in (0, 1)")
        if self.bert_mode is not None and self.bert_mode not in ("pooled", "sequence"):
            raise ValidationError("bert-mode must be pooled or sequence")
        if self.seq_len is not None and self.seq_len < 1:
            raise ValidationError("seq-len must be >= 1")

    @property
    def layout_value(self) -> Layout:
        return LAYOUT_BY_FLAG[self.layout]


def pipeline_config(cfg: RunConfig):
    return default_config(
        stopwords_path=cfg.stopwords, slang_path=cfg.slang, emoticons_path=cfg.emoticons
    )


def load_source(cfg: RunConfig):
    """Load whichever vector source the config names.

    Returns ("glove", EmbeddingTable) or ("precomputed", PrecomputedStore).
    """
    if cfg.glove is not None:
        return "glove", load_glove(cfg.glove)
    store = load_precomputed(cfg.precomputed)
    if cfg.bert_mode is not None:
        wanted = Mode.POOLED if cfg.bert_mode == "pooled" else Mode.SEQUENCE
        if store.mode is not wanted:
            raise ValidationError(
                f"{cfg.precomputed}: file is mode={store.mode.value}, expected {wanted.value}"
            )
    if cfg.seq_len is not None and store.seq_len != cfg.seq_len:
        raise ValidationError(
            f"{cfg.precomputed}: file has len={store.seq_len}, expected {cfg.seq_len}"
        )
    return "precomputed", store


def field_vectors(dataset: Dataset, source, pcfg) -> tuple[list, np.ndarray, np.ndarray, EmbedStats]:
    """Per-record context and response vectors from either source.

    Returns (keys, C, R, stats) with C and R row-aligned to dataset order.
    """
    kind_name, payload = source
    keys = [rec.key(dataset.kind) for rec in dataset.records]
    stats = EmbedStats()
    cvecs = []
    rvecs = []
    if kind_name == "glove":
        for rec in dataset.records:
            rtoks = preprocess_text(rec.response, pcfg)
            ctoks = [preprocess_text(turn, pcfg) for turn in rec.context]
            rvecs.append(embed_sentence(rtoks, payload, stats))
            cvecs.append(embed_context(ctoks, payload, stats))
    else:
        store: PrecomputedStore = payload
        for key in keys:
            entry = store.entries.get(key)
            if entry is None:
                raise ValidationError(f"no precomputed vectors for record key {key!r}")
            cvecs.append(entry[0])
            rvecs.append(entry[1])
    dim = cvecs[0].shape[0] if cvecs else 0
    return keys, np.array(cvecs).reshape(len(keys), dim), np.array(rvecs).reshape(len(keys), dim), stats


def assemble(cvecs: np.ndarray, rvecs: np.ndarray, layout: Layout) -> np.ndarray:
    rows = [make_feature(c, r, layout).values for c, r in zip(cvecs, rvecs)]
    width = rows[0].shape[0] if rows else 0
    return np.array(rows).reshape(len(rows), width)


def labels_of(dataset: Dataset) -> np.ndarray:
    return np.array([label_to_sign(rec.label) for rec in dataset.records], dtype=np.int64)


def split_holdout(n: int, fraction: float, seed: int):
    """Seeded permutation split; both sides are always nonempty."""
    if n < 2:
        raise ValidationError("need at least 2 records to split")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_val = min(max(int(round(n * fraction)), 1), n - 1)
    return np.sort(perm[n_val:]), np.sort(perm[:n_val])


def split_kfold(n: int, k: int, seed: int):
    """Seeded permutation chopped into k contiguous validation folds."""
    if k < 2 or k > n:
        raise ValidationError(f"folds must be in [2, {n}]")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    folds = np.array_split(perm, k)
    out = []
    for i in range(k):
        val = np.sort(folds[i])
        train = np.sort(np.concatenate([folds[j] for j in range(k) if j != i]))
        out.append((train, val))
    return out


def fit_kind(key: str, data: LabeledMatrix, seed: int, hyper: dict):
    hp = dict(hyper)
    if key == "lr":
        return fit_lr(data, lr0=hp.get("lr0"), epochs=hp.get("epochs"), l2=hp.get("l2"),
                      tol=hp.get("tol"), seed=seed)
    if key == "lsvc":
        return fit_lsvc(data, lam=hp.get("lam"), epochs=hp.get("epochs"), seed=seed)
    if key == "gnb":
        return fit_gnb(data, seed=seed)
    if key == "rf":
        return fit_rf(data, n_trees=hp.get("n_trees"), max_depth=hp.get("max_depth"),
                      min_leaf=hp.get("min_leaf"), mtry=hp.get("mtry"), seed=seed)
    raise ValidationError(f"unknown model {key!r}")


def predict_model(model, x: np.ndarray) -> list:
    if model.kind in ("LR", "LSVC"):
        labels, _ = predict_linear(model, x)
    elif model.kind == "GNB":
        labels, _ = predict_gnb(model, x)
    else:
        labels, _ = predict_rf(model, x)
    return labels if isinstance(labels, list) else [labels]


def cmd_train(cfg: RunConfig) -> tuple[EvalReport, str]:
    """Fit one classifier and save it; returns the validation report text and
    the model path."""
    cfg.validate()
    if cfg.train_file is None:
        raise ValidationError("--train-file is required")
    dataset = load_dataset(cfg.train_file, Kind.TRAIN)
    pcfg = pipeline_config(cfg)
    source = load_source(cfg)
    keys, cvecs, rvecs, stats = field_vectors(dataset, source, pcfg)
    x = assemble(cvecs, rvecs, cfg.layout_value)
    y = labels_of(dataset)

    lines = []
    if dataset.dropped:
        lines.append(f"dropped {dataset.dropped} null row(s) from {cfg.train_file}")
    if source[0] == "glove":
        lines.append(f"pooling: {stats.as_dict()}")

    final_report = None
    if cfg.folds is not None:
        fold_f1 = []
        for i, (tr, va) in enumerate(split_kfold(len(keys), cfg.folds, cfg.seed), start=1):
            data = LabeledMatrix(x[tr], y[tr])
            model = fit_kind(cfg.model, data, cfg.seed, cfg.hyper)
            preds = predict_model(model, x[va])
            rep = report(preds, [sign_to_label(s) for s in y[va]])
            fold_f1.append(rep.per_class[SARCASM]["f1"])
            lines.append(f"fold {i}: sarcasm f1 {fold_f1[-1]:.4f} (macro {rep.macro_f1:.4f})")
            final_report = rep
        lines.append(
            f"fold mean sarcasm f1 {np.mean(fold_f1):.4f} (std {np.std(fold_f1):.4f})"
        )
        model = fit_kind(cfg.model, LabeledMatrix(x, y), cfg.seed, cfg.hyper)
    else:
        tr, va = split_holdout(len(keys), cfg.holdout, cfg.seed)
        model = fit_kind(cfg.model, LabeledMatrix(x[tr], y[tr]), cfg.seed, cfg.hyper)
        preds = predict_model(model, x[va])
        final_report = report(preds, [sign_to_label(s) for s in y[va]])
        lines.append(render_report(final_report))

    model.train_config = dict(model.train_config)
    model.train_config.update(
        {"layout": cfg.layout, "source": source[0], "feature_dim": int(x.shape[1])}
    )
    out = cfg.out or "model.json"
    save_model(model, out)
    lines.append(f"saved {model.kind} model to {out}")
    return final_report, "\n".join(lines)


def cmd_predict(model_path: str, cfg: RunConfig) -> str:
    """Write one `<id>,<label>` line per retained test record."""
    cfg.validate()
    if cfg.test_file is None:
        raise ValidationError("--test-file is required")
    model = load_model(model_path)
    dataset = load_dataset(cfg.test_file, Kind.TEST)
    out = cfg.out or "predictions.csv"
    if not dataset.records:
        with open(out, "w", encoding="utf-8") as f:
            f.write("")
        return f"wrote 0 predictions to {out}"
    layout_flag = model.train_config.get("layout", cfg.layout)
    layout = LAYOUT_BY_FLAG.get(layout_flag, cfg.layout_value)
    pcfg = pipeline_config(cfg)
    source = load_source(cfg)
    keys, cvecs, rvecs, _ = field_vectors(dataset, source, pcfg)
    x = assemble(cvecs, rvecs, layout)
    if x.shape[1] != model.d:
        raise ValidationError(f"expected d={model.d}, got {x.shape[1]}")
    preds = predict_model(model, x)
    with open(out, "w", encoding="utf-8") as f:
        for rec, pred in zip(dataset.records, preds):
            f.write(f"{rec.id},{pred}\n")
    return f"wrote {len(preds)} predictions to {out}"


def _read_predictions(path) -> dict:
    preds = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if "," not in line:
                raise ValidationError(f"{path}: line {lineno}: expected id,label")
            rid, label = line.rsplit(",", 1)
            preds[rid] = label
    return preds


def _read_truth(path) -> dict:
    """Gold labels from either a labeled JSONL file (id+label fields) or an
    id,label CSV."""
    truths = {}
    text_path = str(path)
    if text_path.endswith(".jsonl") or text_path.endswith(".json"):
        with open(path, encoding="utf-8") as f:
            for raw in f:
                if not raw.strip():
                    continue
                row = json.loads(raw)
                if row.get("id") is not None and row.get("label") is not None:
                    truths[row["id"]] = row["label"]
        return truths
    return _read_predictions(path)


def cmd_evaluate(predictions_path: str, truth_path: str, out: str | None = None):
    """Score a predictions file against gold labels, aligned by id."""
    preds = _read_predictions(predictions_path)
    truths = _read_truth(truth_path)
    if not truths:
        raise ValidationError(f"{truth_path}: no labeled rows found")
    missing = sorted(set(preds) - set(truths))
    if missing:
        raise ValidationError(
            f"{len(missing)} prediction id(s) absent from truth, e.g. {missing[0]!r}"
        )
    absent = sorted(set(truths) - set(preds))
    if absent:
        raise ValidationError(
            f"{len(absent)} truth id(s) missing a prediction, e.g. {absent[0]!r}"
        )
    ids = sorted(preds)
    rep = report([preds[i] for i in ids], [truths[i] for i in ids])
    if out:
        with open(out, "w", encoding="utf-8") as f:
            json.dump(rep.to_dict(), f, sort_keys=True, indent=2)
            f.write("\n")
    return rep, render_report(rep)


def cmd_preprocess(cfg: RunConfig) -> str:
    """Emit one JSON line per retained record with its key and token lists;
    this file is the input contract of the vector-extractor tool."""
    if (cfg.train_file is None) == (cfg.test_file is None):
        raise ValidationError("exactly one of --train-file or --test-file must be set")
    kind = Kind.TRAIN if cfg.train_file else Kind.TEST
    path = cfg.train_file or cfg.test_file
    dataset = load_dataset(path, kind)
    pcfg = pipeline_config(cfg)
    out = cfg.out or "preprocessed.jsonl"
    with open(out, "w", encoding="utf-8") as f:
        for rec in dataset.records:
            row = {
                "key": rec.key(kind),
                "response_tokens": preprocess_text(rec.response, pcfg),
                "context_tokens": [preprocess_text(t, pcfg) for t in rec.context],
            }
            if kind is Kind.TRAIN:
                row["label"] = rec.label
            f.write(json.dumps(row, sort_keys=True) + "\n")
    return (
        f"wrote {len(dataset.records)} preprocessed record(s) to {out}"
        f" (dropped {dataset.dropped})"
    )


def cmd_embed(cfg: RunConfig) -> str:
    """Write the feature matrix cache for one dataset file."""
    cfg.validate()
    if (cfg.train_file is None) == (cfg.test_file is None):
        raise ValidationError("exactly one of --train-file or --test-file must be set")
    kind = Kind.TRAIN if cfg.train_file else Kind.TEST
    dataset = load_dataset(cfg.train_file or cfg.test_file, kind)
    pcfg = pipeline_config(cfg)
    source = load_source(cfg)
    keys, cvecs, rvecs, stats = field_vectors(dataset, source, pcfg)
    x = assemble(cvecs, rvecs, cfg.layout_value)
    out = cfg.out or "features.txt"
    save_features(out, keys, x)
    note = f" pooling {stats.as_dict()}" if source[0] == "glove" else ""
    return f"wrote {len(keys)} feature row(s) of dim {x.shape[1]} to {out}{note}"


def cmd_ablate(cfg: RunConfig) -> tuple[dict, str]:
    """The {classifier} x {response, both} grid on a seeded holdout."""
    cfg.validate()
    if cfg.train_file is None:
        raise ValidationError("--train-file is required")
    dataset = load_dataset(cfg.train_file, Kind.TRAIN)
    pcfg = pipeline_config(cfg)
    source = load_source(cfg)
    keys, cvecs, rvecs, _ = field_vectors(dataset, source, pcfg)
    y = labels_of(dataset)
    tr, va = split_holdout(len(keys), cfg.holdout, cfg.seed)
    truths = [sign_to_label(s) for s in y[va]]

    matrices = {flag: assemble(cvecs, rvecs, layout) for flag, layout in LAYOUT_BY_FLAG.items()}
    grid = {}
    for key in MODEL_KEYS:
        grid[key] = {}
        for flag, x in matrices.items():
            model = fit_kind(key, LabeledMatrix(x[tr], y[tr]), cfg.seed, cfg.hyper)
            preds = predict_model(model, x[va])
            grid[key][flag] = report(preds, truths)

    text = render_grid({k: dict(v) for k, v in grid.items()})
    if cfg.out:
        doc = {
            k: {flag: rep.to_dict() for flag, rep in v.items()} for k, v in grid.items()
        }
        with open(cfg.out, "w", encoding="utf-8") as f:
            json.dump(doc, f, sort_keys=True, indent=2)
            f.write("\n")
    return grid, text
