"""Command-line entry point.

Subcommands mirror the workflow: preprocess -> embed -> train -> predict ->
evaluate, plus ablate for the two-layout grid. A JSON config file can supply
any flag's value; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import pipeline
from .errors import FormatError, ValidationError

HYPER_KEYS = ("lr0", "epochs", "l2", "tol", "lam", "n_trees", "max_depth", "min_leaf", "mtry")


def _add_common(p: argparse.ArgumentParser, *, source=False, split=False, model=False):
    p.add_argument("--config", help="JSON file of defaults for any flag")
    p.add_argument("--train-file", help="training JSONL file")
    p.add_argument("--test-file", help="test JSONL file")
    p.add_argument("--stopwords", help="override stopword list (one word per line)")
    p.add_argument("--slang", help="override slang map (key<TAB>value per line)")
    p.add_argument("--emoticons", help="override emoticon map (key<TAB>value per line)")
    p.add_argument("--out", help="output path")
    if source:
        p.add_argument("--glove", help="GloVe text file (token v1..vdim per line)")
        p.add_argument("--precomputed", help="precomputed vector interchange file")
        p.add_argument("--layout", choices=("both", "response"),
                       help="feature layout: context-then-response or response only")
        p.add_argument("--bert-mode", choices=("pooled", "sequence"), dest="bert_mode",
                       help="expected mode of the precomputed file")
        p.add_argument("--seq-len", type=int, dest="seq_len",
                       help="expected len of a sequence-mode precomputed file")
    if split:
        p.add_argument("--seed", type=int, help="run seed (default 42)")
        p.add_argument("--holdout", type=float, help="validation fraction (default 0.2)")
        p.add_argument("--folds", type=int, help="use k-fold evaluation instead of a holdout")
    if model:
        p.add_argument("--model", choices=("lr", "lsvc", "gnb", "rf"), help="classifier kind")
        for key in HYPER_KEYS:
            p.add_argument(f"--{key.replace('_', '-')}", type=float, dest=key,
                           help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sarcdet",
                                 description="Tweet sarcasm detection pipeline")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="tokenize/normalize a dataset file to JSONL")
    _add_common(p)

    p = sub.add_parser("embed", help="write the feature-matrix cache for a dataset file")
    _add_common(p, source=True)

    p = sub.add_parser("train", help="fit one classifier and save the model")
    _add_common(p, source=True, split=True, model=True)

    p = sub.add_parser("predict", help="label a test file with a saved model")
    p.add_argument("model_file", help="path of a saved model")
    _add_common(p, source=True)

    p = sub.add_parser("evaluate", help="score a predictions CSV against gold labels")
    p.add_argument("--predictions", required=True, help="CSV of id,label")
    p.add_argument("--truth", required=True,
                   help="gold labels: JSONL with id+label fields, or id,label CSV")
    p.add_argument("--out", help="also write the report as JSON")

    p = sub.add_parser("ablate", help="run the classifier x layout grid")
    _add_common(p, source=True, split=True, model=True)

    return ap


def _merge_config(args: argparse.Namespace) -> pipeline.RunConfig:
    """Start from built-in defaults, apply the config file, then explicit flags."""
    base = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as f:
                base = json.load(f)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{config_path}: invalid JSON: {exc.msg}") from exc
        if not isinstance(base, dict):
            raise FormatError(f"{config_path}: config must be a JSON object")

    cfg = pipeline.RunConfig()
    hyper = dict(base.get("hyper", {}))
    for name in vars(cfg):
        if name == "hyper":
            continue
        if name in base:
            setattr(cfg, name, base[name])
        flag_val = getattr(args, name, None)
        if flag_val is not None:
            setattr(cfg, name, flag_val)
    for key in HYPER_KEYS:
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            hyper[key] = flag_val
    for key in ("epochs", "n_trees", "max_depth", "min_leaf", "mtry"):
        if key in hyper and hyper[key] is not None:
            hyper[key] = int(hyper[key])
    cfg.hyper = hyper
    if cfg.seed is not None:
        cfg.seed = int(cfg.seed)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "evaluate":
            _, text = pipeline.cmd_evaluate(args.predictions, args.truth, args.out)
            print(text)
            return 0
        cfg = _merge_config(args)
        if args.command == "preprocess":
            print(pipeline.cmd_preprocess(cfg))
        elif args.command == "embed":
            print(pipeline.cmd_embed(cfg))
        elif args.command == "train":
            _, text = pipeline.cmd_train(cfg)
            print(text)
        elif args.command == "predict":
            print(pipeline.cmd_predict(args.model_file, cfg))
        elif args.command == "ablate":
            _, text = pipeline.cmd_ablate(cfg)
            print(text)
        return 0
    except (ValidationError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
