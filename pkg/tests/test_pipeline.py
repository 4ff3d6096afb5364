"""End-to-end workflow tests on the bundled smoke dataset, plus config
validation and the CLI surface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from sarcdet.cli import main
from sarcdet.dataset import SARCASM
from sarcdet.embeddings import load_features, load_precomputed
from sarcdet.errors import ValidationError
from sarcdet.pipeline import (
    RunConfig,
    cmd_ablate,
    cmd_embed,
    cmd_evaluate,
    cmd_predict,
    cmd_preprocess,
    cmd_train,
    smoke_paths,
    split_holdout,
    split_kfold,
)

SMOKE = {k: str(v) for k, v in smoke_paths().items()}


class TestRunConfig:
    def test_both_sources_rejected(self):
        cfg = RunConfig(glove="a.txt", precomputed="b.txt")
        with pytest.raises(ValidationError, match="exactly one"):
            cfg.validate()

    def test_no_source_rejected(self):
        with pytest.raises(ValidationError, match="exactly one"):
            RunConfig().validate()

    def test_holdout_bounds(self):
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValidationError, match="holdout"):
                RunConfig(glove="g", holdout=bad).validate()

    def test_folds_bounds(self):
        with pytest.raises(ValidationError, match="folds"):
            RunConfig(glove="g", folds=1).validate()
        RunConfig(glove="g", folds=2).validate()

    def test_bad_model(self):
        with pytest.raises(ValidationError, match="model"):
            RunConfig(glove="g", model="mlp").validate()

    def test_bad_layout(self):
        with pytest.raises(ValidationError, match="layout"):
            RunConfig(glove="g", layout="middle").validate()


class TestSplits:
    def test_holdout_partition(self):
        tr, va = split_holdout(40, 0.2, seed=42)
        assert len(va) == 8 and len(tr) == 32
        assert sorted(np.concatenate([tr, va]).tolist()) == list(range(40))

    def test_holdout_deterministic(self):
        assert np.array_equal(split_holdout(25, 0.3, 7)[0], split_holdout(25, 0.3, 7)[0])

    def test_holdout_never_empty_sides(self):
        tr, va = split_holdout(2, 0.01, seed=0)
        assert len(tr) == 1 and len(va) == 1

    def test_kfold_covers_everything(self):
        folds = split_kfold(23, 4, seed=3)
        assert len(folds) == 4
        all_val = np.concatenate([va for _, va in folds])
        assert sorted(all_val.tolist()) == list(range(23))
        for tr, va in folds:
            assert set(tr.tolist()).isdisjoint(va.tolist())
            assert len(tr) + len(va) == 23

    def test_kfold_bounds(self):
        with pytest.raises(ValidationError):
            split_kfold(5, 6, seed=1)


def smoke_cfg(tmp_path, **kw):
    base = dict(train_file=SMOKE["train"], glove=SMOKE["glove"], seed=42,
                out=str(tmp_path / "model.json"))
    base.update(kw)
    return RunConfig(**base)


class TestCmdTrain:
    def test_lr_glove_smoke(self, tmp_path):
        cfg = smoke_cfg(tmp_path, model="lr")
        rep, text = cmd_train(cfg)
        assert (tmp_path / "model.json").exists()
        assert "saved LR model" in text
        assert rep.per_class[SARCASM]["f1"] > 0.5

    def test_byte_identical_reruns(self, tmp_path):
        cfg1 = smoke_cfg(tmp_path, out=str(tmp_path / "m1.json"))
        cfg2 = smoke_cfg(tmp_path, out=str(tmp_path / "m2.json"))
        cmd_train(cfg1)
        cmd_train(cfg2)
        assert (tmp_path / "m1.json").read_bytes() == (tmp_path / "m2.json").read_bytes()

    def test_kfold_mode(self, tmp_path):
        cfg = smoke_cfg(tmp_path, folds=4, model="gnb")
        _, text = cmd_train(cfg)
        assert "fold mean" in text
        assert (tmp_path / "model.json").exists()

    def test_all_model_kinds_run(self, tmp_path):
        for key in ("lr", "lsvc", "gnb", "rf"):
            cfg = smoke_cfg(tmp_path, model=key, out=str(tmp_path / f"{key}.json"))
            cmd_train(cfg)
            assert (tmp_path / f"{key}.json").exists()

    def test_train_requires_file(self, tmp_path):
        cfg = smoke_cfg(tmp_path, train_file=None)
        with pytest.raises(ValidationError, match="train-file"):
            cmd_train(cfg)


class TestCmdPredict:
    def test_one_line_per_test_record(self, tmp_path):
        model_path = str(tmp_path / "model.json")
        cmd_train(smoke_cfg(tmp_path, out=model_path))
        out = tmp_path / "preds.csv"
        cfg = RunConfig(test_file=SMOKE["test"], glove=SMOKE["glove"], out=str(out))
        msg = cmd_predict(model_path, cfg)
        lines = out.read_text().splitlines()
        assert len(lines) == 10 and "10 predictions" in msg
        for line in lines:
            rid, label = line.split(",")
            assert rid.startswith("s") and label in ("SARCASM", "NOT_SARCASM")

    def test_empty_test_file(self, tmp_path):
        model_path = str(tmp_path / "model.json")
        cmd_train(smoke_cfg(tmp_path, out=model_path))
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        out = tmp_path / "preds.csv"
        cfg = RunConfig(test_file=str(empty), glove=SMOKE["glove"], out=str(out))
        cmd_predict(model_path, cfg)
        assert out.read_text() == ""

    def test_rerun_identical_bytes(self, tmp_path):
        model_path = str(tmp_path / "model.json")
        cmd_train(smoke_cfg(tmp_path, out=model_path))
        out = tmp_path / "preds.csv"
        cfg = RunConfig(test_file=SMOKE["test"], glove=SMOKE["glove"], out=str(out))
        cmd_predict(model_path, cfg)
        first = out.read_bytes()
        cmd_predict(model_path, cfg)
        assert out.read_bytes() == first

    def test_feature_length_mismatch_names_dims(self, tmp_path):
        model_path = str(tmp_path / "model.json")
        cmd_train(smoke_cfg(tmp_path, out=model_path))  # d = 32
        small = tmp_path / "small.txt"
        small.write_text("oh 1 2 3 4\nsure 4 3 2 1\n")
        cfg = RunConfig(test_file=SMOKE["test"], glove=str(small), out=str(tmp_path / "p.csv"))
        with pytest.raises(ValidationError, match="expected d=32, got 8"):
            cmd_predict(model_path, cfg)


class TestCmdEvaluate:
    def test_happy_path_csv_truth(self, tmp_path):
        preds = tmp_path / "p.csv"
        truth = tmp_path / "t.csv"
        preds.write_text("a,SARCASM\nb,NOT_SARCASM\n")
        truth.write_text("a,SARCASM\nb,SARCASM\n")
        rep, text = cmd_evaluate(str(preds), str(truth))
        assert rep.counts.tp == 1 and rep.counts.fn == 1
        assert "SARCASM" in text

    def test_jsonl_truth(self, tmp_path):
        preds = tmp_path / "p.csv"
        preds.write_text("a,SARCASM\n")
        truth = tmp_path / "t.jsonl"
        truth.write_text(json.dumps({"id": "a", "label": "SARCASM"}) + "\n")
        rep, _ = cmd_evaluate(str(preds), str(truth))
        assert rep.accuracy == 1.0

    def test_id_mismatch_rejected(self, tmp_path):
        preds = tmp_path / "p.csv"
        truth = tmp_path / "t.csv"
        preds.write_text("a,SARCASM\n")
        truth.write_text("b,SARCASM\n")
        with pytest.raises(ValidationError, match="absent"):
            cmd_evaluate(str(preds), str(truth))

    def test_report_json_written(self, tmp_path):
        preds = tmp_path / "p.csv"
        truth = tmp_path / "t.csv"
        preds.write_text("a,SARCASM\nb,NOT_SARCASM\n")
        truth.write_text("a,SARCASM\nb,NOT_SARCASM\n")
        out = tmp_path / "rep.json"
        cmd_evaluate(str(preds), str(truth), out=str(out))
        doc = json.loads(out.read_text())
        assert doc["accuracy"] == 1.0


class TestCmdPreprocess:
    def test_writes_keys_and_tokens(self, tmp_path):
        out = tmp_path / "prep.jsonl"
        cfg = RunConfig(train_file=SMOKE["train"], out=str(out))
        msg = cmd_preprocess(cfg)
        assert "40 preprocessed" in msg
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        assert rows[0]["key"] == "t0"
        assert isinstance(rows[0]["response_tokens"], list)
        assert isinstance(rows[0]["context_tokens"][0], list)
        assert rows[0]["label"] in ("SARCASM", "NOT_SARCASM")

    def test_test_file_keys_are_ids(self, tmp_path):
        out = tmp_path / "prep.jsonl"
        cfg = RunConfig(test_file=SMOKE["test"], out=str(out))
        cmd_preprocess(cfg)
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        assert rows[0]["key"] == "s1"
        assert "label" not in rows[0]

    def test_requires_exactly_one_input(self, tmp_path):
        with pytest.raises(ValidationError):
            cmd_preprocess(RunConfig())
        with pytest.raises(ValidationError):
            cmd_preprocess(RunConfig(train_file=SMOKE["train"], test_file=SMOKE["test"]))


class TestCmdEmbed:
    def test_cache_round_trip(self, tmp_path):
        out = tmp_path / "feats.txt"
        cfg = RunConfig(train_file=SMOKE["train"], glove=SMOKE["glove"],
                        layout="both", out=str(out))
        msg = cmd_embed(cfg)
        assert "dim 32" in msg
        keys, x = load_features(out)
        assert len(keys) == 40 and x.shape == (40, 32)
        assert keys[0] == "t0"

    def test_response_layout_half_width(self, tmp_path):
        out = tmp_path / "feats.txt"
        cfg = RunConfig(train_file=SMOKE["train"], glove=SMOKE["glove"],
                        layout="response", out=str(out))
        cmd_embed(cfg)
        _, x = load_features(out)
        assert x.shape == (40, 16)


class TestCmdAblate:
    def test_grid_shape_and_determinism(self, tmp_path):
        cfg = RunConfig(train_file=SMOKE["train"], glove=SMOKE["glove"], seed=42,
                        out=str(tmp_path / "grid.json"))
        grid1, text = cmd_ablate(cfg)
        assert set(grid1) == {"lr", "lsvc", "gnb", "rf"}
        for rows in grid1.values():
            assert set(rows) == {"both", "response"}
        grid2, _ = cmd_ablate(cfg)
        for key in grid1:
            for flag in grid1[key]:
                assert grid1[key][flag].to_dict() == grid2[key][flag].to_dict()
        doc = json.loads((tmp_path / "grid.json").read_text())
        assert doc["lr"]["both"]["per_class"]["SARCASM"]["f1"] >= 0

    def test_context_beats_response_for_lr(self, tmp_path):
        # the bundled data reuses every response string under both labels,
        # so only context can separate the classes
        cfg = RunConfig(train_file=SMOKE["train"], glove=SMOKE["glove"], seed=42)
        grid, _ = cmd_ablate(cfg)
        lr_both = grid["lr"]["both"].per_class[SARCASM]["f1"]
        lr_resp = grid["lr"]["response"].per_class[SARCASM]["f1"]
        assert lr_both >= lr_resp


class TestPrecomputedPath:
    def make_store(self, tmp_path, dim=4):
        rng = np.random.default_rng(6)
        lines = [f"dim={dim} mode=POOLED"]
        for i in range(40):
            for which in ("C", "R"):
                comps = " ".join(f"{v:.6f}" for v in rng.normal(size=dim))
                lines.append(f"t{i} {which} {comps}")
        p = tmp_path / "vectors.txt"
        p.write_text("\n".join(lines) + "\n")
        return p

    def test_train_from_precomputed(self, tmp_path):
        store_path = self.make_store(tmp_path)
        cfg = RunConfig(train_file=SMOKE["train"], precomputed=str(store_path),
                        model="gnb", out=str(tmp_path / "m.json"))
        _, text = cmd_train(cfg)
        assert "saved GNB model" in text

    def test_missing_key_is_an_error(self, tmp_path):
        store_path = tmp_path / "v.txt"
        store_path.write_text("dim=2 mode=POOLED\nt0 C 1 2\nt0 R 3 4\n")
        cfg = RunConfig(train_file=SMOKE["train"], precomputed=str(store_path))
        with pytest.raises(ValidationError, match="t1"):
            cmd_train(cfg)

    def test_bert_mode_flag_checked(self, tmp_path):
        store_path = self.make_store(tmp_path)
        cfg = RunConfig(train_file=SMOKE["train"], precomputed=str(store_path),
                        bert_mode="sequence")
        with pytest.raises(ValidationError, match="mode"):
            cmd_train(cfg)


class TestCli:
    def test_train_and_predict_via_main(self, tmp_path):
        model = tmp_path / "m.json"
        rc = main(["train", "--train-file", SMOKE["train"], "--glove", SMOKE["glove"],
                   "--model", "lr", "--seed", "42", "--out", str(model)])
        assert rc == 0 and model.exists()
        preds = tmp_path / "p.csv"
        rc = main(["predict", str(model), "--test-file", SMOKE["test"],
                   "--glove", SMOKE["glove"], "--out", str(preds)])
        assert rc == 0
        assert len(preds.read_text().splitlines()) == 10

    def test_exclusive_sources_exit_nonzero(self, tmp_path, capsys):
        rc = main(["train", "--train-file", SMOKE["train"], "--glove", SMOKE["glove"],
                   "--precomputed", "x.txt"])
        assert rc != 0
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exit_nonzero(self, capsys):
        rc = main(["train", "--train-file", "/nonexistent.jsonl", "--glove", SMOKE["glove"]])
        assert rc != 0

    def test_config_file_with_flag_override(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({
            "train_file": SMOKE["train"],
            "glove": SMOKE["glove"],
            "model": "gnb",
            "seed": 42,
            "out": str(tmp_path / "from_config.json"),
        }))
        rc = main(["train", "--config", str(config),
                   "--out", str(tmp_path / "overridden.json")])
        assert rc == 0
        assert (tmp_path / "overridden.json").exists()
        assert not (tmp_path / "from_config.json").exists()

    def test_hyperparameter_flags_reach_model(self, tmp_path):
        model = tmp_path / "m.json"
        rc = main(["train", "--train-file", SMOKE["train"], "--glove", SMOKE["glove"],
                   "--model", "rf", "--n-trees", "7", "--seed", "1", "--out", str(model)])
        assert rc == 0
        doc = json.loads(model.read_text())
        assert doc["train_config"]["n_trees"] == 7
        assert len(doc["params"]["trees"]) == 7

    def test_console_script_entry_point(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "sarcdet.cli", "ablate",
             "--train-file", SMOKE["train"], "--glove", SMOKE["glove"], "--seed", "42"],
            capture_output=True, text=True, timeout=120,
        )
        assert result.returncode == 0, result.stderr
        assert "classifier" in result.stdout
        assert "lsvc" in result.stdout
