"""Walkthrough: building figurative-language training sets.

Covers the three dataset-construction steps end to end on a small
synthetic collection: balanced binary sets (all positives + capped
negatives + literal backfill), the prediction/annotation consistency
filter, and threshold calibration on a development set.
"""

import random

from figstyle.corpus import FEATURES, Example, LabelAssertions
from figstyle.flpipe import (
    ProbRecord,
    apply_thresholds,
    build_binary_training_set,
    build_multilabel_corpus,
    calibrate_thresholds,
)

rng = random.Random(0)


def example(ex_id, labels=(), literal=False):
    assertions = {}
    for label in labels:
        if label.startswith("not_"):
            assertions[label[4:]] = False
        else:
            assertions[label] = True
    return Example(
        id=ex_id,
        dataset="demo",
        split="train",
        text=f"Demo sentence {ex_id}.",
        labels=LabelAssertions(assertions=assertions, literal=literal),
    )


print("=== 1. Balanced binary training set ===")
task_pool = [example(f"pos{i}", ["sarcasm"]) for i in range(40)]
task_pool += [example(f"neg{i}", ["not_sarcasm"]) for i in range(50)]
literal_pool = [example(f"lit{i}", literal=True) for i in range(60)]

plan, training_set = build_binary_training_set("sarcasm", task_pool, literal_pool, seed=7)
print(f"positives={plan.n_pos} negatives={plan.n_neg} literals={plan.n_lit}")
print(f"total = {len(training_set)} = 2 x positives (negatives capped at half)")
relabeled = next(ex for ex in training_set if ex.id.startswith("lit"))
print(f"sampled literal {relabeled.id} now carries {relabeled.labels.assertions}\n")

print("=== 2. Consistency filtering for the multi-label corpus ===")
examples = [
    example("keep_a", ["metaphor", "idiom"]),
    example("keep_b", ["not_irony"]),
    example("drop_c", ["simile"]),  # the model below will deny this simile
]
predictions = {
    "keep_a": ProbRecord(
        id="keep_a",
        probs={"metaphor": 0.9, "idiom": 0.8, "simile": 0.6,
               "irony": 0.1, "hyperbole": 0.2, "sarcasm": 0.1},
    ),
    "keep_b": ProbRecord(
        id="keep_b",
        probs={f: 0.05 for f in FEATURES},
    ),
    "drop_c": ProbRecord(
        id="drop_c",
        probs={"simile": 0.2, "metaphor": 0.7, "idiom": 0.1,
               "irony": 0.1, "hyperbole": 0.1, "sarcasm": 0.1},
    ),
}
kept, discarded = build_multilabel_corpus(examples, predictions)
print(f"kept {len(kept)}, discarded {discarded}")
for ex in kept:
    positives = sorted(f for f, v in ex.labels.assertions.items() if v)
    print(f"  {ex.id}: multi-label training labels = {positives or ['(none)']}")
print()

print("=== 3. Per-feature threshold calibration ===")
dev_records = []
reference = {}
for i in range(120):
    rec_id = f"dev{i}"
    probs, truth = {}, {}
    for feature in FEATURES:
        positive = rng.random() < 0.4
        mu = 0.7 if positive else 0.35
        probs[feature] = min(max(rng.gauss(mu, 0.15), 0.0), 1.0)
        truth[feature] = positive
    dev_records.append(ProbRecord(id=rec_id, probs=probs))
    reference[rec_id] = LabelAssertions(assertions=truth)

thresholds = calibrate_thresholds(dev_records, reference, source="binary")
print("calibrated thresholds (weighted-F1 argmax per feature):")
for feature in FEATURES:
    print(f"  {feature:10s} t = {thresholds.thresholds[feature]:.2f}")

assignment = apply_thresholds(dev_records[0], thresholds)
positives = sorted(f for f, v in assignment.items() if v)
print(f"\nrecord {dev_records[0].id} thresholded to positives: {positives}")
