"""Figurative-language dataset construction and evaluation conventions.

Covers four algorithms:

  * balanced binary training sets: keep all N positives for a feature,
    then add min(Q, floor(N/2)) explicit negatives and enough literal
    sentences (re-labeled as negatives) to reach exactly 2N instances;
  * the prediction/annotation consistency filter used to build the
    multi-label corpus: a full six-feature prediction is kept only if it
    contradicts no human assertion;
  * per-feature probability-threshold calibration on a development set
    (grid sweep, weighted-F1 objective, smallest-threshold tie-break);
  * projection of tri-state gold labels onto a single binary task,
    treating annotations from unrelated tasks as negatives.

File formats owned here:

  predictions.jsonl  {"id": str, "probs": {feature: float, ... all six}}
  thresholds.json    {"source": "human"|"binary", "thresholds": {feature: float}}
"""

import json
import math
import random
from dataclasses import dataclass, field, replace

from .corpus import FEATURES, LabelAssertions, _iter_jsonl
from .errors import DataError
from .metrics import weighted_f1

__all__ = [
    "BinarySetPlan",
    "ProbRecord",
    "ThresholdSet",
    "build_binary_training_set",
    "filter_consistent",
    "build_multilabel_corpus",
    "calibrate_thresholds",
    "apply_thresholds",
    "project_gold_for_binary_task",
    "load_prob_records",
    "load_thresholds",
    "save_thresholds",
]

THRESHOLD_GRID = [i / 100.0 for i in range(101)]


@dataclass(frozen=True)
class BinarySetPlan:
    """Sampling plan for one feature's binary training set."""

    feature: str
    n_pos: int
    n_neg: int
    n_lit: int
    seed: int

    def __post_init__(self):
        if self.feature not in FEATURES:
            raise DataError(f"unknown feature {self.feature!r}")
        if self.n_pos < 1:
            raise DataError("binary set needs at least one positive")
        if self.n_neg > self.n_pos // 2:
            raise DataError("negatives may not exceed half the positives")
        if self.n_pos + self.n_neg + self.n_lit != 2 * self.n_pos:
            raise DataError("binary set must total twice the positive count")


@dataclass(frozen=True)
class ProbRecord:
    """Per-example probabilities for all six features."""

    id: str
    probs: dict = field(default_factory=dict)

    def __post_init__(self):
        for feature in FEATURES:
            if feature not in self.probs:
                raise DataError(f"{self.id!r}: missing probability for {feature}")
            p = self.probs[feature]
            if not isinstance(p, (int, float)) or isinstance(p, bool):
                raise DataError(f"{self.id!r}: probability for {feature} not a number")
            if not math.isfinite(p) or not 0.0 <= p <= 1.0:
                raise DataError(
                    f"{self.id!r}: probability {p!r} for {feature} outside [0, 1]"
                )
        if set(self.probs) - set(FEATURES):
            raise DataError(f"{self.id!r}: probabilities for unknown features")


@dataclass(frozen=True)
class ThresholdSet:
    """Per-feature decision thresholds plus their calibration source."""

    thresholds: dict
    calibration_source: str

    def __post_init__(self):
        if self.calibration_source not in ("human", "binary"):
            raise DataError(
                f"unknown calibration source {self.calibration_source!r}"
            )
        for feature in FEATURES:
            if feature not in self.thresholds:
                raise DataError(f"missing threshold for {feature}")
            t = self.thresholds[feature]
            if not math.isfinite(t) or not 0.0 <= t <= 1.0:
                raise DataError(f"threshold {t!r} for {feature} outside [0, 1]")


def build_binary_training_set(feature, task_pool, literal_pool, seed):
    """Assemble the balanced binary training set for one feature.

    task_pool holds the examples carrying an explicit positive or negative
    assertion for `feature`; literal_pool holds literal sentences drawn
    from all datasets (disjoint from task_pool by id). With P positives
    and Q explicit negatives, the output keeps all P positives plus
    n_neg = min(Q, floor(P/2)) negatives and n_lit = P - n_neg literals,
    each sampled uniformly without replacement. Sampled literals are
    re-labeled as explicit negatives for the feature.

    Returns (BinarySetPlan, examples).
    """
    if feature not in FEATURES:
        raise DataError(f"unknown feature {feature!r}")
    task_pool = list(task_pool)
    literal_pool = list(literal_pool)
    task_ids = {ex.id for ex in task_pool}
    overlap = [ex.id for ex in literal_pool if ex.id in task_ids]
    if overlap:
        raise DataError(
            f"literal pool overlaps task pool by id (e.g. {overlap[0]!r})"
        )
    positives = [ex for ex in task_pool if ex.labels.assertions.get(feature) is True]
    negatives = [ex for ex in task_pool if ex.labels.assertions.get(feature) is False]
    n_pos = len(positives)
    if n_pos == 0:
        raise DataError(f"no positive examples for {feature}")
    n_neg = min(len(negatives), n_pos // 2)
    n_lit = n_pos - n_neg
    if len(literal_pool) < n_lit:
        raise DataError(
            f"literal pool too small for {feature}: need {n_lit}, "
            f"have {len(literal_pool)}"
        )
    rng = random.Random(seed)
    if n_neg < len(negatives):
        chosen = sorted(rng.sample(range(len(negatives)), n_neg))
        sampled_negatives = [negatives[i] for i in chosen]
    else:
        sampled_negatives = negatives
    chosen = sorted(rng.sample(range(len(literal_pool)), n_lit))
    sampled_literals = [
        replace(
            literal_pool[i],
            labels=LabelAssertions(assertions={feature: False}, literal=False),
        )
        for i in chosen
    ]
    plan = BinarySetPlan(
        feature=feature, n_pos=n_pos, n_neg=n_neg, n_lit=n_lit, seed=seed
    )
    return plan, positives + sampled_negatives + sampled_literals


def _check_full_assignment(predicted):
    for feature in FEATURES:
        if feature not in predicted or not isinstance(predicted[feature], bool):
            raise DataError(
                f"predicted assignment must cover all six features; "
                f"{feature} missing or non-boolean"
            )


def filter_consistent(human, predicted):
    """True iff a full six-feature prediction contradicts no human assertion.

    `predicted` maps every feature to True (positive) or False (negative).
    Human literal=True expands to all-features-negative; unknown human
    assertions constrain nothing. Total function, never raises on label
    content.
    """
    _check_full_assignment(predicted)
    for feature in FEATURES:
        h = human.effective(feature)
        if h is None:
            continue
        if h != predicted[feature]:
            return False
    return True


def build_multilabel_corpus(examples, predictions):
    """Filter examples through the consistency check and re-label the keepers.

    `predictions` maps example id -> ProbRecord; the producing binary
    models are expected to treat p >= 0.5 as positive, and that same
    convention turns each record into a full six-feature assignment here.
    Accepted examples carry that assignment as their training labels.

    Returns (accepted_examples, discarded_count).
    """
    accepted = []
    discarded = 0
    for ex in examples:
        if ex.id not in predictions:
            raise DataError(f"missing prediction for id {ex.id!r}")
        probs = predictions[ex.id].probs
        assignment = {f: probs[f] >= 0.5 for f in FEATURES}
        if filter_consistent(ex.labels, assignment):
            accepted.append(
                replace(ex, labels=LabelAssertions(assertions=assignment))
            )
        else:
            discarded += 1
    return accepted, discarded


def _sweep_feature(records, reference, feature):
    """Best (threshold, weighted F1) for one feature over the 0.01 grid.

    Ties break toward the smallest threshold. Reference assertions that
    are unknown for this feature are skipped.
    """
    pairs = []
    for record in records:
        labels = reference.get(record.id)
        if labels is None:
            raise DataError(f"missing reference labels for id {record.id!r}")
        truth = labels.effective(feature)
        if truth is None:
            continue
        pairs.append((record.probs[feature], truth))
    if not pairs:
        raise DataError(f"no reference labels at all for feature {feature!r}")
    gold = ["positive" if truth else "negative" for _, truth in pairs]
    best_t, best_f1 = 0.0, -1.0
    for t in THRESHOLD_GRID:
        pred = ["positive" if p >= t else "negative" for p, _ in pairs]
        f1 = weighted_f1(gold, pred)
        if f1 > best_f1:
            best_t, best_f1 = t, f1
    return best_t, best_f1


def calibrate_thresholds(dev, reference, source):
    """Pick the weighted-F1-maximizing threshold per feature on a dev set.

    dev: iterable of ProbRecord. reference: id -> LabelAssertions (human
    annotations or binary-model assignments; for human labels, unknown
    assertions are skipped per feature). source tags the resulting
    ThresholdSet as "human" or "binary" calibrated.
    """
    records = list(dev)
    if not records:
        raise DataError("cannot calibrate on an empty development set")
    thresholds = {}
    for feature in FEATURES:
        thresholds[feature], _ = _sweep_feature(records, reference, feature)
    return ThresholdSet(thresholds=thresholds, calibration_source=source)


def apply_thresholds(probs, thresholds):
    """Threshold one ProbRecord into a full assignment (positive iff p >= t)."""
    return {
        feature: probs.probs[feature] >= thresholds.thresholds[feature]
        for feature in FEATURES
    }


def project_gold_for_binary_task(labels, feature):
    """Project tri-state gold labels onto one binary task.

    True (positive) iff the task feature is asserted positive; explicit
    negatives, literal sentences, and annotations for unrelated tasks all
    map to False.
    """
    return labels.assertions.get(feature) is True


def load_prob_records(path):
    """Load predictions.jsonl into an id -> ProbRecord map."""
    records = {}
    for lineno, record in _iter_jsonl(path):
        if "id" not in record or "probs" not in record:
            raise DataError(f"{path}:{lineno}: record needs id and probs")
        rec_id = record["id"]
        if rec_id in records:
            raise DataError(f"{path}:{lineno}: duplicate id {rec_id!r}")
        records[rec_id] = ProbRecord(id=rec_id, probs=record["probs"])
    return records


def save_thresholds(thresholds, path):
    payload = {
        "source": thresholds.calibration_source,
        "thresholds": {f: thresholds.thresholds[f] for f in FEATURES},
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def load_thresholds(path):
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    if "source" not in payload or "thresholds" not in payload:
        raise DataError(f"{path}: thresholds file needs source and thresholds")
    return ThresholdSet(
        thresholds=payload["thresholds"], calibration_source=payload["source"]
    )
