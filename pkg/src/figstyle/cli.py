"""The `figstyle` command line: every pipeline stage as a subcommand.

Conventions, uniform across subcommands:

  * stdout carries machine-readable JSON results only; progress and
    warnings go to stderr;
  * --seed is accepted everywhere (stages that draw no random numbers
    simply ignore it);
  * --dry-run validates inputs and configuration, then exits without
    writing anything;
  * exit codes: 0 success, 2 configuration errors (bad flags, missing
    paths, unknown config keys), 3 data validation errors, 1 anything
    else;
  * given identical inputs and seeds, reruns overwrite output files with
    identical bytes.

run-experiment reads a TOML config; scalar top-level keys may be
overridden by FIGSTYLE_* environment variables, and CLI flags override
both (flag > environment > file).
"""

import argparse
import json
import os
import sys
import warnings

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import corpus, embed, flpipe, harness, mlp, ngrams, stylometry
from .errors import ConfigError, DataError
from .metrics import confusion_matrix, per_class_scores, weighted_f1

PROG = "figstyle"


def _progress(message):
    print(message, file=sys.stderr)


def _emit(payload):
    print(json.dumps(payload, ensure_ascii=False))


def _check_inputs(paths):
    for path in paths:
        if path is None:
            continue
        if not os.path.exists(path):
            raise ConfigError(f"input path does not exist: {path}")


def _seed(args):
    return 0 if args.seed is None else args.seed


def _load_examples(path):
    return corpus.load_fl_collection([path])


def _write_json(payload, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2)
        handle.write("\n")


# ----------------------------------------------------------------- handlers


def cmd_ingest(args):
    if bool(args.fl) == bool(args.docs):
        raise ConfigError("ingest needs exactly one of --fl or --docs")
    _check_inputs((args.fl or []) + ([args.docs] if args.docs else []))
    if args.dry_run:
        return 0
    if args.fl:
        collection = corpus.load_fl_collection(args.fl)
        corpus.write_fl_examples(collection, args.out)
        _emit(
            {
                "records": len(collection),
                "dropped_labels": collection.dropped_labels,
            }
        )
    else:
        loaded = corpus.load_aa_corpus(args.docs)
        corpus.write_aa_docs(loaded, args.out)
        _emit(
            {
                "records": len(loaded),
                "authors": len(loaded.author_histogram),
                "histogram": dict(sorted(loaded.author_histogram.items())),
            }
        )
    return 0


def cmd_split(args):
    _check_inputs([args.input])
    if args.dry_run:
        return 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", corpus.SplitWarning)
        if args.kind == "examples":
            items = list(_load_examples(args.input))
            train, test = corpus.stratified_split(
                items, args.test_fraction, _seed(args)
            )
            corpus.write_fl_examples(train, args.out_train)
            corpus.write_fl_examples(test, args.out_test)
        else:
            docs = list(corpus.load_aa_corpus(args.input))
            train, test = corpus.split_docs_by_author(
                docs, args.test_fraction, _seed(args)
            )
            corpus.write_aa_docs(train, args.out_train)
            corpus.write_aa_docs(test, args.out_test)
    singleton = sum(
        1 for w in caught if issubclass(w.category, corpus.SplitWarning)
    )
    for w in caught:
        _progress(f"warning: {w.message}")
    _emit({"train": len(train), "test": len(test), "singleton_strata": singleton})
    return 0


def cmd_build_binary_sets(args):
    _check_inputs([args.input])
    features = args.features.split(",") if args.features else list(corpus.FEATURES)
    for feature in features:
        if feature not in corpus.FEATURES:
            raise ConfigError(f"unknown feature {feature!r}")
    if args.dry_run:
        return 0
    examples = [ex for ex in _load_examples(args.input) if ex.split == "train"]
    literal_pool = [ex for ex in examples if ex.labels.literal]
    os.makedirs(args.out_dir, exist_ok=True)
    plans = {}
    for feature in features:
        task_pool = [
            ex for ex in examples if feature in ex.labels.assertions
        ]
        has_positive = any(
            ex.labels.assertions.get(feature) for ex in task_pool
        )
        if not has_positive and not args.features:
            _progress(f"skipping {feature}: no positive examples")
            continue
        plan, out = flpipe.build_binary_training_set(
            feature, task_pool, literal_pool, _seed(args)
        )
        corpus.write_fl_examples(
            out, os.path.join(args.out_dir, f"binary_{feature}.jsonl")
        )
        plans[feature] = {
            "positive": plan.n_pos,
            "negative": plan.n_neg,
            "literal": plan.n_lit,
        }
    _emit(plans)
    return 0


def cmd_build_multilabel(args):
    _check_inputs([args.input, args.pred])
    if args.dry_run:
        return 0
    examples = list(_load_examples(args.input))
    predictions = flpipe.load_prob_records(args.pred)
    kept, discarded = flpipe.build_multilabel_corpus(examples, predictions)
    corpus.write_fl_examples(kept, args.out)
    _emit({"kept": len(kept), "discarded": discarded})
    return 0


def _reference_assertions(path, kind):
    """Reference labels for calibration: examples.jsonl or predictions.jsonl."""
    if kind == "auto":
        with open(path, "r", encoding="utf-8") as handle:
            first = handle.readline()
        kind = "predictions" if "\"probs\"" in first else "examples"
    if kind == "examples":
        return {ex.id: ex.labels for ex in _load_examples(path)}
    records = flpipe.load_prob_records(path)
    return {
        rec_id: corpus.LabelAssertions(
            assertions={f: rec.probs[f] >= 0.5 for f in corpus.FEATURES}
        )
        for rec_id, rec in records.items()
    }


def cmd_calibrate(args):
    _check_inputs([args.dev, args.ref])
    if args.dry_run:
        return 0
    dev = list(flpipe.load_prob_records(args.dev).values())
    reference = _reference_assertions(args.ref, args.ref_kind)
    thresholds = flpipe.calibrate_thresholds(dev, reference, args.source)
    flpipe.save_thresholds(thresholds, args.out)
    _emit(
        {
            "source": thresholds.calibration_source,
            "thresholds": {
                f: thresholds.thresholds[f] for f in corpus.FEATURES
            },
        }
    )
    return 0


def cmd_apply_thresholds(args):
    _check_inputs([args.pred, args.thresholds])
    if args.dry_run:
        return 0
    thresholds = flpipe.load_thresholds(args.thresholds)
    records = flpipe.load_prob_records(args.pred)
    with open(args.out, "w", encoding="utf-8") as handle:
        for rec_id, record in records.items():
            assignment = flpipe.apply_thresholds(record, thresholds)
            positives = sorted(f for f, v in assignment.items() if v)
            handle.write(
                json.dumps({"id": rec_id, "positive": positives}) + "\n"
            )
    _emit({"records": len(records)})
    return 0


def _load_predicted_labels(path):
    """labels.jsonl ({"id", "positive": [...]}) -> id -> full assignment."""
    predictions = {}
    for lineno, record in corpus._iter_jsonl(path):
        if "id" not in record or "positive" not in record:
            raise DataError(f"{path}:{lineno}: record needs id and positive")
        positives = set(record["positive"])
        unknown = positives - set(corpus.FEATURES)
        if unknown:
            raise DataError(
                f"{path}:{lineno}: unknown features {sorted(unknown)}"
            )
        predictions[record["id"]] = {
            f: f in positives for f in corpus.FEATURES
        }
    return predictions


def cmd_score_fl(args):
    _check_inputs([args.test, args.pred])
    if args.dry_run:
        return 0
    examples = [ex for ex in _load_examples(args.test) if ex.split == "test"]
    if not examples:
        raise DataError("no test-split examples to score")
    predictions = _load_predicted_labels(args.pred)
    result = harness.score_fl_predictions(examples, predictions, args.mode)
    if args.out:
        _write_json(result, args.out)
    _emit(result)
    return 0


def _read_docs_any(path):
    """docs.jsonl or examples.jsonl -> list of (id, text, split)."""
    with open(path, "r", encoding="utf-8") as handle:
        first = handle.readline()
    if "\"doc_id\"" in first:
        return [(d.doc_id, d.text, d.split) for d in corpus.load_aa_corpus(path)]
    return [(ex.id, ex.text, ex.split) for ex in _load_examples(path)]


def cmd_stylo(args):
    if args.list_features:
        for name in stylometry.FEATURE_NAMES:
            print(name)
        return 0
    if not args.input or not args.out:
        raise ConfigError("stylo needs --in and --out (or --list-features)")
    _check_inputs([args.input])
    if args.dry_run:
        return 0
    records = _read_docs_any(args.input)
    freq_records = (
        records
        if args.freq_split == "all"
        else [r for r in records if r[2] == "train"]
    )
    if not freq_records:
        raise DataError(
            "no training-split records to build the frequency table from; "
            "use --freq-split all"
        )
    freq = stylometry.build_corpus_frequencies(text for _, text, _ in freq_records)
    vectors = [
        stylometry.compute_stylo_vector(text, freq) for _, text, _ in records
    ]
    stylometry.write_stylo_vectors([r[0] for r in records], vectors, args.out)
    _emit({"records": len(records), "width": len(stylometry.FEATURE_NAMES)})
    return 0


def cmd_fit_ngrams(args):
    _check_inputs([args.input])
    config = ngrams.NgramConfig(
        analyzer=args.analyzer,
        n_min=args.n_min,
        n_max=args.n_max,
        vocab_size=args.vocab_size,
        stopword_policy=args.stopword_policy,
    )
    if args.dry_run:
        return 0
    records = _read_docs_any(args.input)
    if args.split == "train":
        records = [r for r in records if r[2] == "train"]
    if not records:
        raise DataError("no documents selected to fit on")
    fitted = ngrams.fit([text for _, text, _ in records], config)
    ngrams.save_vectorizer(fitted, args.out)
    _emit(
        {
            "analyzer": config.analyzer,
            "vocabulary": fitted.width,
            "documents": fitted.doc_count,
        }
    )
    return 0


def cmd_vectorize(args):
    _check_inputs([args.input, args.vectorizer])
    if args.dry_run:
        return 0
    fitted = ngrams.load_vectorizer(args.vectorizer)
    records = _read_docs_any(args.input)
    rows = [ngrams.transform(text, fitted) for _, text, _ in records]
    embed.write_doc_vectors([r[0] for r in records], rows, args.out)
    _emit({"records": len(records), "width": fitted.width})
    return 0


def cmd_pool(args):
    _check_inputs([args.input])
    if args.dry_run:
        return 0
    loaded = embed.load_vectors(args.input)
    pooled = embed.as_document_vectors(loaded)
    embed.write_doc_vectors(list(pooled), list(pooled.values()), args.out)
    _emit({"records": len(pooled)})
    return 0


def cmd_concat(args):
    _check_inputs(args.inputs)
    if args.dry_run:
        return 0
    matrices = []
    for idx, path in enumerate(args.inputs):
        matrices.append(embed.load_feature_matrix(path, f"part{idx}"))
    merged = embed.concat_features(matrices)
    embed.write_doc_vectors(merged.doc_ids, merged.rows, args.out)
    _emit({"records": len(merged.doc_ids), "width": merged.width})
    return 0


def _train_config_from_args(args):
    return mlp.TrainConfig(
        hidden_units=args.hidden_units,
        learning_rate=args.learning_rate,
        max_epochs=args.max_epochs,
        validation_fraction=args.validation_fraction,
        patience=args.patience,
        tolerance=args.tolerance,
        batch_size=args.batch_size,
        seed=_seed(args),
        standardize=args.standardize,
    )


def cmd_train_mlp(args):
    _check_inputs([args.features, args.labels])
    config = _train_config_from_args(args)
    if args.dry_run:
        return 0
    docs = [d for d in corpus.load_aa_corpus(args.labels) if d.split == "train"]
    if not docs:
        raise DataError("no training-split documents in the labels file")
    vectors = embed.as_document_vectors(embed.load_vectors(args.features))
    matrix = embed.matrix_from_vectors(
        [d.doc_id for d in docs], vectors, args.feature_spec
    )
    model, report = mlp.train(
        matrix.rows, [d.author for d in docs], config, args.feature_spec
    )
    mlp.save_model(model, report, args.out)
    _emit(
        {
            "classes": len(model.class_index),
            "epochs_run": report["epochs_run"],
            "best_epoch": report["best_epoch"],
            "best_val_score": report["best_val_score"],
        }
    )
    return 0


def cmd_evaluate(args):
    _check_inputs([args.model, args.features, args.labels])
    if args.dry_run:
        return 0
    model, _ = mlp.load_model(args.model)
    docs = [
        d for d in corpus.load_aa_corpus(args.labels) if d.split == args.split
    ]
    if not docs:
        raise DataError(f"no {args.split}-split documents in the labels file")
    vectors = embed.as_document_vectors(embed.load_vectors(args.features))
    matrix = embed.matrix_from_vectors(
        [d.doc_id for d in docs], vectors, model.feature_spec or "features"
    )
    gold = [d.author for d in docs]
    pred, _ = mlp.predict(model, matrix.rows)
    classes = model.class_index
    result = {
        "split": args.split,
        "n": len(docs),
        "weighted_f1": weighted_f1(gold, pred),
        "per_class": per_class_scores(gold, pred),
        "class_order": classes,
        "confusion": confusion_matrix(gold, pred, classes),
    }
    if args.out:
        _write_json(result, args.out)
    _emit({"split": args.split, "n": len(docs), "weighted_f1": result["weighted_f1"]})
    return 0


_EXPERIMENT_SCHEMA = {
    "corpus": str,
    "features": list,
    "seed": int,
    "output_dir": str,
    "name": str,
    "embeddings": dict,
    "ngrams": dict,
    "train": dict,
}
_NGRAMS_KEYS = {"vocab_size", "n_min", "n_max"}
_TRAIN_KEYS = {
    "hidden_units",
    "learning_rate",
    "max_epochs",
    "validation_fraction",
    "patience",
    "tolerance",
    "batch_size",
    "standardize",
}
_ENV_PREFIX = "FIGSTYLE_"


def _load_experiment_config(path):
    with open(path, "rb") as handle:
        try:
            raw = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML ({exc})")
    unknown = set(raw) - set(_EXPERIMENT_SCHEMA)
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    for key, value in raw.items():
        if not isinstance(value, _EXPERIMENT_SCHEMA[key]):
            raise ConfigError(f"{path}: key {key!r} has the wrong type")
    if unknown_ngrams := set(raw.get("ngrams", {})) - _NGRAMS_KEYS:
        raise ConfigError(f"{path}: unknown ngrams keys {sorted(unknown_ngrams)}")
    if unknown_train := set(raw.get("train", {})) - _TRAIN_KEYS:
        raise ConfigError(f"{path}: unknown train keys {sorted(unknown_train)}")
    return raw


def _apply_env_overrides(raw):
    for key, caster in (
        ("corpus", str),
        ("name", str),
        ("output_dir", str),
        ("seed", int),
    ):
        value = os.environ.get(_ENV_PREFIX + key.upper())
        if value is not None:
            try:
                raw[key] = caster(value)
            except ValueError:
                raise ConfigError(
                    f"environment override {_ENV_PREFIX + key.upper()} "
                    f"is not a valid {caster.__name__}"
                )
    return raw


def cmd_run_experiment(args):
    _check_inputs([args.config])
    raw = _apply_env_overrides(_load_experiment_config(args.config))
    if args.corpus is not None:
        raw["corpus"] = args.corpus
    if args.out_dir is not None:
        raw["output_dir"] = args.out_dir
    if args.name is not None:
        raw["name"] = args.name
    if args.seed is not None:
        raw["seed"] = args.seed
    if "corpus" not in raw:
        raise ConfigError("experiment config needs a corpus path")
    if "features" not in raw:
        raise ConfigError("experiment config needs a features list")
    _check_inputs([raw["corpus"]] + list(raw.get("embeddings", {}).values()))
    train_cfg = mlp.TrainConfig(seed=raw.get("seed", 0), **raw.get("train", {}))
    ngram_cfg = raw.get("ngrams", {})
    spec = harness.ExperimentSpec(
        corpus=raw["corpus"],
        features=raw["features"],
        train=train_cfg,
        seed=raw.get("seed", 0),
        output_dir=raw.get("output_dir"),
        embeddings=raw.get("embeddings", {}),
        ngram_vocab_size=ngram_cfg.get("vocab_size", 1024),
        ngram_n_min=ngram_cfg.get("n_min", 1),
        ngram_n_max=ngram_cfg.get("n_max", 5),
        name=raw.get("name", ""),
    )
    if args.dry_run:
        return 0
    if args.seeds < 1:
        raise ConfigError("--seeds must be at least 1")
    _progress(f"running experiment on {spec.corpus} [{', '.join(spec.features)}]")
    if args.seeds == 1:
        report = harness.run_experiment(spec)
        _progress(f"finished in {report.runtime_seconds:.1f}s")
        _emit(
            {
                "name": report.name,
                "feature_spec": report.feature_spec,
                "weighted_f1": report.weighted_f1,
                "n_train": report.n_train,
                "n_test": report.n_test,
            }
        )
        return 0
    # robustness mode: one independent run per seed, reported together
    import dataclasses as _dc
    import statistics

    runs = []
    for offset in range(args.seeds):
        seed = spec.seed + offset
        run_spec = _dc.replace(
            spec,
            seed=seed,
            output_dir=(
                os.path.join(spec.output_dir, f"seed{seed}")
                if spec.output_dir
                else None
            ),
        )
        report = harness.run_experiment(run_spec)
        _progress(f"seed {seed}: weighted F1 {report.weighted_f1:.4f}")
        runs.append({"seed": seed, "weighted_f1": report.weighted_f1})
    scores = [r["weighted_f1"] for r in runs]
    _emit(
        {
            "name": report.name,
            "feature_spec": report.feature_spec,
            "runs": runs,
            "mean_weighted_f1": statistics.fmean(scores),
            "stdev_weighted_f1": (
                statistics.stdev(scores) if len(scores) > 1 else 0.0
            ),
        }
    )
    return 0


def cmd_report(args):
    _check_inputs(args.reports)
    if args.dry_run:
        return 0
    table, matrix = harness.summarize_reports(args.reports)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(table)
    _emit(matrix)
    return 0


def cmd_list_features(args):
    for name in stylometry.FEATURE_NAMES:
        print(name)
    return 0


# ------------------------------------------------------------------ parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None, help="random seed (default 0)"
    )
    common.add_argument(
        "--dry-run",
        action="store_true",
        help="validate inputs and config, write nothing",
    )

    parser = argparse.ArgumentParser(
        prog=PROG,
        description=(
            "Figurative-language dataset construction and stylometric "
            "authorship attribution."
        ),
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser(
        "ingest", parents=[common], help="validate and normalize a corpus file"
    )
    p.add_argument("--fl", nargs="+", metavar="PATH", help="examples.jsonl inputs")
    p.add_argument("--docs", metavar="PATH", help="docs.jsonl input")
    p.add_argument("--out", required=True, help="normalized output path")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser(
        "split", parents=[common], help="deterministic stratified train/test split"
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kind", choices=("examples", "docs"), default="examples")
    p.add_argument("--test-fraction", type=float, default=0.1)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser(
        "build-binary-sets",
        parents=[common],
        help="balanced 2N binary training sets per feature",
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument(
        "--features",
        default="",
        help="comma-separated feature subset (default: all with positives)",
    )
    p.set_defaults(handler=cmd_build_binary_sets)

    p = sub.add_parser(
        "build-multilabel",
        parents=[common],
        help="consistency-filtered multi-label corpus",
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pred", required=True, help="predictions.jsonl")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_build_multilabel)

    p = sub.add_parser(
        "calibrate", parents=[common], help="per-feature probability thresholds"
    )
    p.add_argument("--dev", required=True, help="dev predictions.jsonl")
    p.add_argument("--ref", required=True, help="reference labels file")
    p.add_argument("--source", choices=("human", "binary"), required=True)
    p.add_argument(
        "--ref-kind",
        choices=("auto", "examples", "predictions"),
        default="auto",
        help="schema of --ref (predictions are thresholded at 0.5)",
    )
    p.add_argument("--out", required=True, help="thresholds.json output")
    p.set_defaults(handler=cmd_calibrate)

    p = sub.add_parser(
        "apply-thresholds", parents=[common], help="probabilities to label sets"
    )
    p.add_argument("--pred", required=True, help="predictions.jsonl")
    p.add_argument("--thresholds", required=True, help="thresholds.json")
    p.add_argument("--out", required=True, help="labels.jsonl output")
    p.set_defaults(handler=cmd_apply_thresholds)

    p = sub.add_parser(
        "score-fl", parents=[common], help="score FL predictions per feature"
    )
    p.add_argument("--test", required=True, help="examples.jsonl with gold labels")
    p.add_argument("--pred", required=True, help="labels.jsonl predictions")
    p.add_argument("--mode", choices=("multilabel", "per-task"), required=True)
    p.add_argument("--out", help="optional report.json output")
    p.set_defaults(handler=cmd_score_fl)

    p = sub.add_parser(
        "stylo", parents=[common], help="52-slot stylometric vectors"
    )
    p.add_argument("--in", dest="input", help="docs.jsonl or examples.jsonl")
    p.add_argument("--out", help="stylo.jsonl output")
    p.add_argument(
        "--freq-split",
        choices=("train", "all"),
        default="train",
        help="records used for the word-frequency-class table",
    )
    p.add_argument(
        "--list-features",
        action="store_true",
        help="print the 52 feature names in slot order and exit",
    )
    p.set_defaults(handler=cmd_stylo)

    p = sub.add_parser(
        "fit-ngrams", parents=[common], help="fit a TF-IDF n-gram vectorizer"
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--analyzer", choices=("word", "char"), required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--vocab-size", type=int, default=1024)
    p.add_argument(
        "--stopword-policy", choices=ngrams.STOPWORD_POLICIES, default="both"
    )
    p.add_argument(
        "--split",
        choices=("train", "all"),
        default="train",
        help="which records to fit on",
    )
    p.add_argument("--out", required=True, help="vectorizer.json output")
    p.set_defaults(handler=cmd_fit_ngrams)

    p = sub.add_parser(
        "vectorize", parents=[common], help="apply a fitted vectorizer"
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--vectorizer", required=True, help="vectorizer.json")
    p.add_argument("--out", required=True, help="vectors.jsonl output")
    p.set_defaults(handler=cmd_vectorize)

    p = sub.add_parser(
        "pool", parents=[common], help="mean-pool sentence vectors per document"
    )
    p.add_argument("--in", dest="input", required=True, help="vectors.jsonl")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_pool)

    p = sub.add_parser(
        "concat", parents=[common], help="concatenate document vector files"
    )
    p.add_argument(
        "--in", dest="inputs", nargs="+", required=True, metavar="PATH"
    )
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_concat)

    p = sub.add_parser(
        "train-mlp", parents=[common], help="train the MLP classifier"
    )
    p.add_argument("--features", required=True, help="vectors.jsonl")
    p.add_argument("--labels", required=True, help="docs.jsonl")
    p.add_argument("--feature-spec", default="features")
    p.add_argument("--hidden-units", type=int, default=1024)
    p.add_argument("--learning-rate", type=float, default=2e-5)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--validation-fraction", type=float, default=0.1)
    p.add_argument("--patience", type=int, default=10)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.add_argument("--batch-size", type=int, default=0)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--out", required=True, help="model.json output")
    p.set_defaults(handler=cmd_train_mlp)

    p = sub.add_parser(
        "evaluate", parents=[common], help="evaluate a trained model"
    )
    p.add_argument("--model", required=True, help="model.json")
    p.add_argument("--features", required=True, help="vectors.jsonl")
    p.add_argument("--labels", required=True, help="docs.jsonl")
    p.add_argument("--split", choices=("train", "test"), default="test")
    p.add_argument("--out", help="optional report.json output")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser(
        "run-experiment", parents=[common], help="config-driven AA experiment"
    )
    p.add_argument("--config", required=True, help="experiment TOML file")
    p.add_argument("--corpus", help="override the corpus path")
    p.add_argument("--out-dir", help="override the output directory")
    p.add_argument("--name", help="override the experiment name")
    p.add_argument(
        "--seeds",
        type=int,
        default=1,
        help="run this many consecutive seeds and report mean/stdev",
    )
    p.set_defaults(handler=cmd_run_experiment)

    p = sub.add_parser(
        "report", parents=[common], help="summarize experiment reports"
    )
    p.add_argument("--reports", nargs="+", required=True, metavar="PATH")
    p.add_argument("--out", help="summary.md output")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser(
        "list-features",
        parents=[common],
        help="print the 52 stylometric feature names",
    )
    p.set_defaults(handler=cmd_list_features)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "handler", None):
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.handler(args)
    except ConfigError as exc:
        _progress(f"{PROG}: config error: {exc}")
        return 2
    except DataError as exc:
        _progress(f"{PROG}: data error: {exc}")
        return 3
    except Exception as exc:  # noqa: BLE001 - the CLI boundary
        _progress(f"{PROG}: error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
