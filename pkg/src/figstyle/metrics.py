"""Classification metrics: per-class precision/recall/F1 and weighted F1.

Weighted F1 averages per-class F1 scores with weights proportional to
gold-class support. Classes that never occur in the gold labels carry no
weight and are excluded; a class with a zero-division in precision,
recall, or F1 contributes 0 for the affected quantity.
"""

from collections import Counter

from .errors import DataError

__all__ = ["per_class_scores", "weighted_f1", "confusion_matrix"]


def per_class_scores(gold, pred):
    """Per-class precision/recall/F1/support for the classes present in gold.

    Returns a dict class -> {"precision", "recall", "f1", "support"}.
    """
    if len(gold) != len(pred):
        raise DataError(
            f"gold/pred length mismatch: {len(gold)} vs {len(pred)}"
        )
    if not gold:
        raise DataError("cannot score empty label sequences")
    support = Counter(gold)
    tp = Counter()
    fp = Counter()
    fn = Counter()
    for g, p in zip(gold, pred):
        if g == p:
            tp[g] += 1
        else:
            fn[g] += 1
            fp[p] += 1
    scores = {}
    for cls in sorted(support):
        p_den = tp[cls] + fp[cls]
        r_den = tp[cls] + fn[cls]
        precision = tp[cls] / p_den if p_den else 0.0
        recall = tp[cls] / r_den if r_den else 0.0
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        scores[cls] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": support[cls],
        }
    return scores


def weighted_f1(gold, pred):
    """Support-weighted mean of per-class F1 over the classes present in gold."""
    scores = per_class_scores(gold, pred)
    total = sum(s["support"] for s in scores.values())
    return sum(s["f1"] * s["support"] for s in scores.values()) / total


def confusion_matrix(gold, pred, classes):
    """Counts[i][j] = examples with gold classes[i] predicted as classes[j].

    Predictions outside `classes` are rejected; use the union of gold and
    predicted labels when building `classes`.
    """
    index = {c: i for i, c in enumerate(classes)}
    matrix = [[0] * len(classes) for _ in classes]
    for g, p in zip(gold, pred):
        if g not in index or p not in index:
            raise DataError(f"label outside class list: {g!r} / {p!r}")
        matrix[index[g]][index[p]] += 1
    return matrix
