import contextlib
import io
import json
import os

import pytest

from helpers import synthetic_aa_docs
from figstyle.cli import build_parser, main
from figstyle.corpus import FEATURES, write_aa_docs

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")

ALL_COMMANDS = [
    "ingest",
    "split",
    "build-binary-sets",
    "build-multilabel",
    "calibrate",
    "apply-thresholds",
    "score-fl",
    "stylo",
    "fit-ngrams",
    "vectorize",
    "pool",
    "concat",
    "train-mlp",
    "evaluate",
    "run-experiment",
    "report",
    "list-features",
]


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestHelpGoldens:
    @pytest.mark.parametrize("command", [None] + ALL_COMMANDS)
    def test_help_matches_golden(self, command, monkeypatch):
        monkeypatch.setenv("COLUMNS", "80")
        parser = build_parser()
        buf = io.StringIO()
        argv = ([command] if command else []) + ["--help"]
        with pytest.raises(SystemExit) as excinfo:
            with contextlib.redirect_stdout(buf):
                parser.parse_args(argv)
        assert excinfo.value.code == 0
        name = command or "top"
        with open(os.path.join(GOLDEN_DIR, f"help_{name}.txt")) as handle:
            assert buf.getvalue() == handle.read()

    def test_every_subcommand_advertises_seed_and_dry_run(self, monkeypatch):
        monkeypatch.setenv("COLUMNS", "200")
        for command in ALL_COMMANDS:
            buf = io.StringIO()
            with pytest.raises(SystemExit):
                with contextlib.redirect_stdout(buf):
                    build_parser().parse_args([command, "--help"])
            text = buf.getvalue()
            assert "--seed" in text, command
            assert "--dry-run" in text, command


class TestExitCodes:
    def test_missing_input_path_is_config_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            ["ingest", "--fl", "/no/such/file.jsonl", "--out", str(tmp_path / "o")],
            capsys,
        )
        assert code == 2
        assert "config error" in err

    def test_bad_data_is_data_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{not json}\n", encoding="utf-8")
        code, _, err = run_cli(
            ["ingest", "--fl", str(bad), "--out", str(tmp_path / "o")], capsys
        )
        assert code == 3
        assert "data error" in err

    def test_no_command_prints_help(self, capsys):
        code, _, err = run_cli([], capsys)
        assert code == 2
        assert "COMMAND" in err

    def test_dry_run_with_missing_path_exits_2_and_writes_nothing(
        self, capsys, tmp_path
    ):
        out = tmp_path / "never.jsonl"
        code, _, _ = run_cli(
            ["ingest", "--fl", "/missing.jsonl", "--out", str(out), "--dry-run"],
            capsys,
        )
        assert code == 2
        assert not out.exists()

    def test_dry_run_on_valid_inputs_writes_nothing(self, capsys, write_jsonl, tmp_path):
        src = write_jsonl(
            "in.jsonl",
            [
                {
                    "id": "a",
                    "dataset": "d",
                    "split": "train",
                    "text": "Hello there.",
                    "labels": ["irony"],
                }
            ],
        )
        out = tmp_path / "out.jsonl"
        code, _, _ = run_cli(
            ["ingest", "--fl", src, "--out", str(out), "--dry-run"], capsys
        )
        assert code == 0
        assert not out.exists()


@pytest.fixture
def fl_file(write_jsonl):
    records = []
    for i in range(30):
        feature = FEATURES[i % 3]
        records.append(
            {
                "id": f"x{i}",
                "dataset": "demo",
                "split": "train",
                "text": f"Sample sentence number {i} talking about things.",
                "labels": [feature] if i % 2 else [f"not_{feature}"],
            }
        )
    for i in range(12):
        records.append(
            {
                "id": f"lit{i}",
                "dataset": "demo",
                "split": "train",
                "text": f"A plain literal sentence number {i}.",
                "labels": ["literal"],
            }
        )
    return write_jsonl("fl.jsonl", records)


class TestFLPipelineCommands:
    def test_split_is_deterministic_and_idempotent(self, fl_file, tmp_path, capsys):
        outs = []
        for tag in ("one", "two"):
            tr = tmp_path / f"train_{tag}.jsonl"
            te = tmp_path / f"test_{tag}.jsonl"
            code, out, _ = run_cli(
                [
                    "split",
                    "--in",
                    fl_file,
                    "--test-fraction",
                    "0.2",
                    "--seed",
                    "9",
                    "--out-train",
                    str(tr),
                    "--out-test",
                    str(te),
                ],
                capsys,
            )
            assert code == 0
            outs.append((tr.read_bytes(), te.read_bytes(), out))
        assert outs[0] == outs[1]

    def test_build_binary_sets_writes_plans(self, fl_file, tmp_path, capsys):
        out_dir = tmp_path / "binary"
        code, out, _ = run_cli(
            [
                "build-binary-sets",
                "--in",
                fl_file,
                "--out-dir",
                str(out_dir),
                "--seed",
                "3",
            ],
            capsys,
        )
        assert code == 0
        plans = json.loads(out)
        for feature, plan in plans.items():
            assert plan["positive"] + plan["negative"] + plan["literal"] == (
                2 * plan["positive"]
            )
            assert (out_dir / f"binary_{feature}.jsonl").exists()

    def test_calibrate_apply_score_round_trip(self, fl_file, write_jsonl, tmp_path, capsys):
        import random

        rng = random.Random(0)
        prob_records = []
        test_records = []
        for i in range(40):
            rec_id = f"p{i}"
            truth = {f: rng.random() < 0.5 for f in FEATURES}
            probs = {
                f: rng.uniform(0.7, 1.0) if truth[f] else rng.uniform(0.0, 0.4)
                for f in FEATURES
            }
            prob_records.append({"id": rec_id, "probs": probs})
            labels = [f for f in FEATURES if truth[f]] + [
                f"not_{f}" for f in FEATURES if not truth[f]
            ]
            test_records.append(
                {
                    "id": rec_id,
                    "dataset": "demo",
                    "split": "test",
                    "text": f"Held out sentence {i}.",
                    "labels": labels,
                }
            )
        dev_path = write_jsonl("dev_probs.jsonl", prob_records)
        ref_path = write_jsonl("dev_ref.jsonl", test_records)
        thresholds_path = tmp_path / "thresholds.json"
        code, out, _ = run_cli(
            [
                "calibrate",
                "--dev",
                dev_path,
                "--ref",
                ref_path,
                "--source",
                "human",
                "--out",
                str(thresholds_path),
            ],
            capsys,
        )
        assert code == 0
        assert set(json.loads(out)["thresholds"]) == set(FEATURES)

        labels_path = tmp_path / "labels.jsonl"
        code, _, _ = run_cli(
            [
                "apply-thresholds",
                "--pred",
                dev_path,
                "--thresholds",
                str(thresholds_path),
                "--out",
                str(labels_path),
            ],
            capsys,
        )
        assert code == 0

        code, out, _ = run_cli(
            [
                "score-fl",
                "--test",
                ref_path,
                "--pred",
                str(labels_path),
                "--mode",
                "multilabel",
            ],
            capsys,
        )
        assert code == 0
        result = json.loads(out)
        # thresholds were calibrated on this very dev set; separable -> perfect
        assert result["macro_f1"] == 1.0

    def test_build_multilabel_reports_counts(self, write_jsonl, tmp_path, capsys):
        examples = [
            {
                "id": f"m{i}",
                "dataset": "demo",
                "split": "train",
                "text": f"Sentence {i}.",
                "labels": ["metaphor"],
            }
            for i in range(4)
        ]
        preds = [
            {
                "id": f"m{i}",
                "probs": {f: (0.9 if f == "metaphor" and i else 0.1) for f in FEATURES},
            }
            for i in range(4)
        ]
        ex_path = write_jsonl("ex.jsonl", examples)
        pred_path = write_jsonl("pred.jsonl", preds)
        out_path = tmp_path / "multilabel.jsonl"
        code, out, _ = run_cli(
            [
                "build-multilabel",
                "--in",
                ex_path,
                "--pred",
                pred_path,
                "--out",
                str(out_path),
            ],
            capsys,
        )
        assert code == 0
        assert json.loads(out) == {"kept": 3, "discarded": 1}


@pytest.fixture
def aa_corpus_file(tmp_path):
    docs = synthetic_aa_docs(n_authors=3, docs_per_author=12, seed=8)
    path = tmp_path / "docs.jsonl"
    write_aa_docs(docs, str(path))
    return str(path)


class TestAAPipelineCommands:
    def test_stylo_fit_vectorize_train_evaluate(self, aa_corpus_file, tmp_path, capsys):
        stylo_path = tmp_path / "stylo.jsonl"
        code, out, _ = run_cli(
            ["stylo", "--in", aa_corpus_file, "--out", str(stylo_path)], capsys
        )
        assert code == 0
        assert json.loads(out)["width"] == 52

        vec_json = tmp_path / "vectorizer.json"
        code, _, _ = run_cli(
            [
                "fit-ngrams",
                "--in",
                aa_corpus_file,
                "--analyzer",
                "char",
                "--n-min",
                "1",
                "--n-max",
                "3",
                "--vocab-size",
                "128",
                "--out",
                str(vec_json),
            ],
            capsys,
        )
        assert code == 0

        vectors = tmp_path / "vectors.jsonl"
        code, _, _ = run_cli(
            [
                "vectorize",
                "--in",
                aa_corpus_file,
                "--vectorizer",
                str(vec_json),
                "--out",
                str(vectors),
            ],
            capsys,
        )
        assert code == 0

        model = tmp_path / "model.json"
        code, out, _ = run_cli(
            [
                "train-mlp",
                "--features",
                str(vectors),
                "--labels",
                aa_corpus_file,
                "--hidden-units",
                "32",
                "--learning-rate",
                "0.05",
                "--max-epochs",
                "120",
                "--patience",
                "25",
                "--seed",
                "2",
                "--out",
                str(model),
            ],
            capsys,
        )
        assert code == 0

        code, out, _ = run_cli(
            [
                "evaluate",
                "--model",
                str(model),
                "--features",
                str(vectors),
                "--labels",
                aa_corpus_file,
            ],
            capsys,
        )
        assert code == 0
        result = json.loads(out)
        assert result["split"] == "test"
        assert result["weighted_f1"] >= 0.9

    def test_pool_and_concat(self, write_jsonl, tmp_path, capsys):
        sent_path = write_jsonl(
            "sent.jsonl",
            [
                {"id": "a", "sentences": [[1.0, 3.0], [3.0, 5.0]]},
                {"id": "b", "sentences": [[2.0, 2.0]]},
            ],
        )
        pooled = tmp_path / "pooled.jsonl"
        code, _, _ = run_cli(
            ["pool", "--in", sent_path, "--out", str(pooled)], capsys
        )
        assert code == 0
        rows = [json.loads(line) for line in pooled.read_text().splitlines()]
        assert rows[0] == {"id": "a", "vector": [2.0, 4.0]}

        other = write_jsonl(
            "other.jsonl",
            [{"id": "a", "vector": [9.0]}, {"id": "b", "vector": [8.0]}],
        )
        merged = tmp_path / "merged.jsonl"
        code, out, _ = run_cli(
            ["concat", "--in", str(pooled), other, "--out", str(merged)], capsys
        )
        assert code == 0
        assert json.loads(out)["width"] == 3

    def test_run_experiment_from_toml_with_overrides(
        self, aa_corpus_file, tmp_path, capsys, monkeypatch
    ):
        config = tmp_path / "exp.toml"
        config.write_text(
            f"""
corpus = "{aa_corpus_file}"
features = ["char_tfidf"]
seed = 11

[ngrams]
vocab_size = 128
n_max = 3

[train]
hidden_units = 32
learning_rate = 0.05
max_epochs = 120
patience = 25
""",
            encoding="utf-8",
        )
        out_dir = tmp_path / "exp_out"
        monkeypatch.setenv("FIGSTYLE_OUTPUT_DIR", str(tmp_path / "env_out"))
        code, out, _ = run_cli(
            [
                "run-experiment",
                "--config",
                str(config),
                "--out-dir",
                str(out_dir),  # flag beats the environment override
            ],
            capsys,
        )
        assert code == 0
        assert (out_dir / "report.json").exists()
        assert not (tmp_path / "env_out").exists()
        summary = json.loads(out)
        assert summary["weighted_f1"] >= 0.9

        report_path = out_dir / "report.json"
        code, out, _ = run_cli(
            [
                "report",
                "--reports",
                str(report_path),
                "--out",
                str(tmp_path / "summary.md"),
            ],
            capsys,
        )
        assert code == 0
        assert "char_tfidf" in (tmp_path / "summary.md").read_text()

    def test_env_override_applies_without_flag(
        self, aa_corpus_file, tmp_path, capsys, monkeypatch
    ):
        config = tmp_path / "exp.toml"
        config.write_text(
            f"""
corpus = "{aa_corpus_file}"
features = ["stylo"]

[train]
hidden_units = 16
max_epochs = 2
""",
            encoding="utf-8",
        )
        env_out = tmp_path / "env_out"
        monkeypatch.setenv("FIGSTYLE_OUTPUT_DIR", str(env_out))
        code, _, _ = run_cli(
            ["run-experiment", "--config", str(config)], capsys
        )
        assert code == 0
        assert (env_out / "report.json").exists()

    def test_multi_seed_robustness_mode(self, aa_corpus_file, tmp_path, capsys):
        config = tmp_path / "exp.toml"
        config.write_text(
            f"""
corpus = "{aa_corpus_file}"
features = ["char_tfidf"]
output_dir = "{tmp_path / 'multi'}"

[ngrams]
vocab_size = 64
n_max = 3

[train]
hidden_units = 16
learning_rate = 0.05
max_epochs = 30
patience = 10
""",
            encoding="utf-8",
        )
        code, out, _ = run_cli(
            ["run-experiment", "--config", str(config), "--seeds", "3"], capsys
        )
        assert code == 0
        summary = json.loads(out)
        assert [r["seed"] for r in summary["runs"]] == [0, 1, 2]
        assert 0.0 <= summary["mean_weighted_f1"] <= 1.0
        for seed in (0, 1, 2):
            assert (tmp_path / "multi" / f"seed{seed}" / "report.json").exists()

    def test_unknown_config_key_rejected(self, aa_corpus_file, tmp_path, capsys):
        config = tmp_path / "exp.toml"
        config.write_text(
            f'corpus = "{aa_corpus_file}"\nfeatures = ["stylo"]\nbogus = 1\n',
            encoding="utf-8",
        )
        code, _, err = run_cli(
            ["run-experiment", "--config", str(config)], capsys
        )
        assert code == 2
        assert "bogus" in err

    def test_list_features_prints_52_names(self, capsys):
        code, out, _ = run_cli(["list-features"], capsys)
        assert code == 0
        assert len(out.strip().splitlines()) == 52

    def test_stylo_list_features_flag(self, capsys):
        code, out, _ = run_cli(["stylo", "--list-features"], capsys)
        assert code == 0
        assert out.strip().splitlines()[0] == "avg_word_length_chars"
