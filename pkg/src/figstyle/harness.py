"""Experiment orchestration: feature assembly, MLP training, evaluation.

An experiment is (corpus, feature components, training config, seed).
Feature components are built strictly from the training split -- the
stylometric frequency table and the TF-IDF vocabularies never see test
text, and the report records a fingerprint of the fit inputs so leakage
is checkable after the fact.

Reports serialize to report.json. Wall-clock runtime is returned to the
caller but deliberately kept out of the file so that reruns with
identical inputs and seeds produce byte-identical artifacts.

Also houses the figurative-language scoring conventions: binary tasks
score against gold projected with project_gold_for_binary_task (unrelated
annotations count as negatives), multi-label scoring skips unknown
assertions per feature.
"""

import dataclasses
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import mlp, ngrams, stylometry
from .corpus import FEATURES, load_aa_corpus
from .embed import (
    FeatureMatrix,
    as_document_vectors,
    concat_features,
    load_vectors,
    matrix_from_vectors,
)
from .errors import ConfigError, DataError
from .flpipe import project_gold_for_binary_task
from .metrics import confusion_matrix, per_class_scores, weighted_f1

__all__ = [
    "ExperimentSpec",
    "EvalReport",
    "weighted_f1",
    "run_experiment",
    "score_fl_predictions",
    "summarize_reports",
]

KNOWN_COMPONENTS = ("stylo", "word_tfidf", "char_tfidf")


@dataclass
class ExperimentSpec:
    """Everything needed to run one (corpus x feature set) experiment."""

    corpus: str
    features: list
    train: mlp.TrainConfig = field(default_factory=mlp.TrainConfig)
    seed: int = 0
    output_dir: str = None
    embeddings: dict = field(default_factory=dict)
    ngram_vocab_size: int = 1024
    ngram_n_min: int = 1
    ngram_n_max: int = 5
    name: str = ""

    def __post_init__(self):
        if not self.features:
            raise ConfigError("experiment needs at least one feature component")
        for component in self.features:
            if component in KNOWN_COMPONENTS:
                continue
            if component.startswith("embedding:"):
                name = component.split(":", 1)[1]
                if name not in self.embeddings:
                    raise ConfigError(
                        f"feature {component!r} has no vector file configured"
                    )
                continue
            raise ConfigError(f"unknown feature component {component!r}")


@dataclass
class EvalReport:
    """Evaluation result; everything except runtime_seconds is serialized."""

    name: str
    corpus: str
    feature_spec: str
    seed: int
    weighted_f1: float
    per_class: dict
    class_order: list
    confusion: list
    n_train: int
    n_test: int
    train_report: dict
    fit_fingerprint: str
    config_echo: dict
    runtime_seconds: float = 0.0

    def to_dict(self):
        payload = dataclasses.asdict(self)
        del payload["runtime_seconds"]
        return payload


def _fit_fingerprint(doc_ids):
    digest = hashlib.sha256()
    for doc_id in sorted(doc_ids):
        digest.update(doc_id.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


def _build_component(component, spec, train_docs, test_docs):
    """FeatureMatrix pair (train, test) for one feature component."""
    train_ids = [d.doc_id for d in train_docs]
    test_ids = [d.doc_id for d in test_docs]
    if component == "stylo":
        freq = stylometry.build_corpus_frequencies(d.text for d in train_docs)
        width = len(stylometry.FEATURE_NAMES)
        spec_str = f"stylo({width})"
        train_rows = np.vstack(
            [stylometry.compute_stylo_vector(d.text, freq).values for d in train_docs]
        )
        test_rows = np.vstack(
            [stylometry.compute_stylo_vector(d.text, freq).values for d in test_docs]
        )
        return (
            FeatureMatrix(doc_ids=train_ids, rows=train_rows, feature_spec=spec_str),
            FeatureMatrix(doc_ids=test_ids, rows=test_rows, feature_spec=spec_str),
        )
    if component in ("word_tfidf", "char_tfidf"):
        config = ngrams.NgramConfig(
            analyzer="word" if component == "word_tfidf" else "char",
            n_min=spec.ngram_n_min,
            n_max=spec.ngram_n_max,
            vocab_size=spec.ngram_vocab_size,
        )
        fitted = ngrams.fit([d.text for d in train_docs], config)
        spec_str = f"{component}({fitted.width})"
        train_rows = np.vstack([ngrams.transform(d.text, fitted) for d in train_docs])
        test_rows = np.vstack([ngrams.transform(d.text, fitted) for d in test_docs])
        return (
            FeatureMatrix(doc_ids=train_ids, rows=train_rows, feature_spec=spec_str),
            FeatureMatrix(doc_ids=test_ids, rows=test_rows, feature_spec=spec_str),
        )
    name = component.split(":", 1)[1]
    vectors = as_document_vectors(load_vectors(spec.embeddings[name]))
    dim = len(next(iter(vectors.values()))) if vectors else 0
    spec_str = f"{name}({dim})"
    return (
        matrix_from_vectors(train_ids, vectors, spec_str),
        matrix_from_vectors(test_ids, vectors, spec_str),
    )


def run_experiment(spec):
    """Run one AA experiment end to end; returns the EvalReport.

    Writes report.json and model.json under spec.output_dir when set.
    """
    started = time.perf_counter()
    corpus = load_aa_corpus(spec.corpus)
    train_docs = [d for d in corpus if d.split == "train"]
    test_docs = [d for d in corpus if d.split == "test"]
    if not train_docs or not test_docs:
        raise DataError("experiment corpus needs both train and test documents")

    train_parts = []
    test_parts = []
    for component in spec.features:
        train_m, test_m = _build_component(component, spec, train_docs, test_docs)
        train_parts.append(train_m)
        test_parts.append(test_m)
    train_matrix = concat_features(train_parts)
    test_matrix = concat_features(test_parts)

    config = dataclasses.replace(spec.train, seed=spec.seed)
    model, train_report = mlp.train(
        train_matrix.rows,
        [d.author for d in train_docs],
        config,
        feature_spec=train_matrix.feature_spec,
    )
    gold = [d.author for d in test_docs]
    pred, _ = mlp.predict(model, test_matrix.rows)

    report = EvalReport(
        name=spec.name or os.path.basename(spec.corpus),
        corpus=spec.corpus,
        feature_spec=train_matrix.feature_spec,
        seed=spec.seed,
        weighted_f1=weighted_f1(gold, pred),
        per_class=per_class_scores(gold, pred),
        class_order=model.class_index,
        confusion=confusion_matrix(gold, pred, model.class_index),
        n_train=len(train_docs),
        n_test=len(test_docs),
        train_report=train_report,
        fit_fingerprint=_fit_fingerprint([d.doc_id for d in train_docs]),
        config_echo={
            "features": list(spec.features),
            "train": dataclasses.asdict(config),
            "ngram_vocab_size": spec.ngram_vocab_size,
            "ngram_n_min": spec.ngram_n_min,
            "ngram_n_max": spec.ngram_n_max,
        },
        runtime_seconds=0.0,
    )
    report.runtime_seconds = time.perf_counter() - started
    if spec.output_dir:
        os.makedirs(spec.output_dir, exist_ok=True)
        with open(
            os.path.join(spec.output_dir, "report.json"), "w", encoding="utf-8"
        ) as handle:
            json.dump(report.to_dict(), handle, indent=2)
            handle.write("\n")
        mlp.save_model(
            model, train_report, os.path.join(spec.output_dir, "model.json")
        )
    return report


def score_fl_predictions(test_examples, predictions, mode):
    """Per-feature weighted F1 for thresholded multi-label predictions.

    predictions: id -> full six-feature assignment {feature: bool}.
    mode "per-task" projects the tri-state gold onto each binary task
    (annotations from unrelated tasks count as negatives); mode
    "multilabel" scores against the tri-state gold directly, skipping
    unknown assertions. Returns {"per_feature": {...}, "macro_f1": ...}.
    """
    if mode not in ("per-task", "multilabel"):
        raise ConfigError(f"unknown scoring mode {mode!r}")
    examples = list(test_examples)
    for ex in examples:
        if ex.id not in predictions:
            raise DataError(f"missing prediction for id {ex.id!r}")
    per_feature = {}
    macro = []
    for feature in FEATURES:
        gold = []
        pred = []
        for ex in examples:
            if mode == "per-task":
                truth = project_gold_for_binary_task(ex.labels, feature)
            else:
                truth = ex.labels.effective(feature)
                if truth is None:
                    continue
            gold.append("positive" if truth else "negative")
            pred.append(
                "positive" if predictions[ex.id][feature] else "negative"
            )
        if not gold:
            per_feature[feature] = {"weighted_f1": None, "n": 0}
            continue
        score = weighted_f1(gold, pred)
        per_feature[feature] = {
            "weighted_f1": score,
            "n": len(gold),
            "per_class": per_class_scores(gold, pred),
        }
        macro.append(score)
    return {
        "mode": mode,
        "per_feature": per_feature,
        "macro_f1": sum(macro) / len(macro) if macro else None,
    }


def summarize_reports(report_paths):
    """Assemble experiment reports into one corpus x feature-set matrix.

    Returns (markdown_table, matrix_dict). Cells are weighted F1.
    """
    cells = {}
    corpora = []
    specs = []
    for path in report_paths:
        with open(path, "r", encoding="utf-8") as handle:
            report = json.load(handle)
        name = report["name"]
        feature_spec = report["feature_spec"]
        if name not in corpora:
            corpora.append(name)
        if feature_spec not in specs:
            specs.append(feature_spec)
        cells[(name, feature_spec)] = report["weighted_f1"]
    lines = ["| corpus | " + " | ".join(specs) + " |"]
    lines.append("|" + "---|" * (len(specs) + 1))
    for name in corpora:
        row = [name]
        for feature_spec in specs:
            value = cells.get((name, feature_spec))
            row.append("-" if value is None else f"{value:.4f}")
        lines.append("| " + " | ".join(row) + " |")
    matrix = {
        name: {
            fs: cells.get((name, fs)) for fs in specs if (name, fs) in cells
        }
        for name in corpora
    }
    return "\n".join(lines) + "\n", matrix
