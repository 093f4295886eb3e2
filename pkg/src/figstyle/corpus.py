"""Data model and ingestion for figurative-language and authorship corpora.

Two interchange formats, both JSON Lines:

  examples.jsonl  {"id": str, "dataset": str, "split": "train"|"test",
                   "text": str, "labels": [str]}
                  where labels mix positive feature names ("sarcasm"),
                  explicit negatives ("not_sarcasm"), and "literal".
  docs.jsonl      {"doc_id": str, "author": str, "split": "train"|"test",
                   "text": str}

Label semantics are tri-state per feature: a record asserting "sarcasm"
says nothing about the other five features. "literal" means the sentence
contains none of the six features; it expands to all-features-negative
for consistency checking but is stored as its own flag so the distinction
between literal sentences and task-specific negatives is never lost.

Pre-processing on load is minimal: Unicode NFC normalization plus
whitespace trimming. Inputs are otherwise passed through byte-faithful.
"""

import json
import math
import random
import unicodedata
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace

from .errors import DataError

__all__ = [
    "FEATURES",
    "LabelAssertions",
    "Example",
    "AuthorDoc",
    "FLCollection",
    "AACorpus",
    "SplitWarning",
    "load_fl_collection",
    "load_aa_corpus",
    "stratified_split",
    "split_docs_by_author",
    "merge_predefined_splits",
    "write_fl_examples",
    "write_aa_docs",
]

# The closed feature set. Unknown feature names in label fields are either
# dropped (plain vocabulary like "satire") or rejected (malformed "not_X").
FEATURES = ("metaphor", "simile", "sarcasm", "hyperbole", "idiom", "irony")

_NEGATIVE_PREFIX = "not_"


class SplitWarning(UserWarning):
    """Raised (as a warning) when a stratum is too small to split."""


def _clean_text(text):
    return unicodedata.normalize("NFC", text).strip()


def _round_half_up(x):
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class LabelAssertions:
    """Tri-state per-feature labels plus the literal flag.

    `assertions` maps feature -> True (positive) / False (negative);
    features absent from the map are unknown. literal=True asserts the
    sentence is free of all six features and is incompatible with any
    positive assertion.
    """

    assertions: dict = field(default_factory=dict)
    literal: bool = False

    def __post_init__(self):
        for feature, value in self.assertions.items():
            if feature not in FEATURES:
                raise DataError(f"unknown feature {feature!r}")
            if not isinstance(value, bool):
                raise DataError(f"assertion for {feature!r} must be bool")
        if self.literal and any(self.assertions.values()):
            raise DataError("literal example cannot assert a positive feature")

    def effective(self, feature):
        """Assertion for `feature` with literal expanded: True/False/None."""
        if feature in self.assertions:
            return self.assertions[feature]
        if self.literal:
            return False
        return None

    def signature(self):
        """Sorted tuple of asserted label strings; the stratum key."""
        parts = []
        for feature, value in self.assertions.items():
            parts.append(feature if value else _NEGATIVE_PREFIX + feature)
        if self.literal:
            parts.append("literal")
        return tuple(sorted(parts))

    def to_label_list(self):
        return list(self.signature())


@dataclass(frozen=True)
class Example:
    """One FL-annotated sentence."""

    id: str
    dataset: str
    split: str
    text: str
    labels: LabelAssertions

    def __post_init__(self):
        if self.split not in ("train", "test"):
            raise DataError(f"unknown split {self.split!r} for id {self.id!r}")
        if not self.text.strip():
            raise DataError(f"empty text for id {self.id!r}")


@dataclass(frozen=True)
class AuthorDoc:
    """One authorship-attribution document."""

    doc_id: str
    author: str
    split: str
    text: str

    def __post_init__(self):
        if self.split not in ("train", "test"):
            raise DataError(
                f"unknown split {self.split!r} for doc {self.doc_id!r}"
            )
        if not self.text.strip():
            raise DataError(f"empty text for doc {self.doc_id!r}")


@dataclass
class FLCollection:
    """Loaded FL examples plus the count of dropped out-of-scope labels."""

    examples: list
    dropped_labels: int = 0

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def __getitem__(self, idx):
        return self.examples[idx]


@dataclass
class AACorpus:
    """Loaded AA documents plus the per-author document histogram."""

    docs: list
    author_histogram: Counter

    def __len__(self):
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def __getitem__(self, idx):
        return self.docs[idx]


def _parse_labels(raw_labels, where):
    """Turn a raw label list into LabelAssertions + dropped-label count."""
    assertions = {}
    literal = False
    dropped = 0
    for label in raw_labels:
        if not isinstance(label, str):
            raise DataError(f"{where}: label {label!r} is not a string")
        if label == "literal":
            literal = True
        elif label in FEATURES:
            if assertions.get(label) is False:
                raise DataError(
                    f"{where}: conflicting assertions for {label!r}"
                )
            assertions[label] = True
        elif label.startswith(_NEGATIVE_PREFIX) and label[4:] in FEATURES:
            feature = label[4:]
            if assertions.get(feature) is True:
                raise DataError(
                    f"{where}: conflicting assertions for {feature!r}"
                )
            assertions[feature] = False
        else:
            dropped += 1
    if literal and any(assertions.values()):
        raise DataError(f"{where}: literal co-occurs with a positive label")
    return LabelAssertions(assertions=assertions, literal=literal), dropped


def _iter_jsonl(path):
    """Yield (line_number, parsed_object) for every non-blank line."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: malformed JSON ({exc.msg})")


def _require(record, key, path, lineno, typ=str):
    if key not in record:
        raise DataError(f"{path}:{lineno}: missing field {key!r}")
    value = record[key]
    if not isinstance(value, typ):
        raise DataError(f"{path}:{lineno}: field {key!r} has wrong type")
    return value


def load_fl_collection(paths):
    """Load one or more examples.jsonl files into a single collection.

    Labels outside the six-feature set plus "literal" are dropped and
    counted; duplicate ids (within or across files) are rejected.
    """
    examples = []
    dropped = 0
    seen_ids = set()
    for path in paths:
        for lineno, record in _iter_jsonl(path):
            ex_id = _require(record, "id", path, lineno)
            dataset = _require(record, "dataset", path, lineno)
            split = _require(record, "split", path, lineno)
            text = _clean_text(_require(record, "text", path, lineno))
            raw_labels = _require(record, "labels", path, lineno, list)
            if ex_id in seen_ids:
                raise DataError(f"{path}:{lineno}: duplicate id {ex_id!r}")
            seen_ids.add(ex_id)
            labels, n_dropped = _parse_labels(
                raw_labels, f"{path}:{lineno}"
            )
            dropped += n_dropped
            examples.append(
                Example(
                    id=ex_id,
                    dataset=dataset,
                    split=split,
                    text=text,
                    labels=labels,
                )
            )
    return FLCollection(examples=examples, dropped_labels=dropped)


def load_aa_corpus(path):
    """Load a docs.jsonl corpus and check the closed-set author constraint.

    Every author appearing in the test split must also appear in the
    training split; a violation is a hard error.
    """
    docs = []
    seen_ids = set()
    for lineno, record in _iter_jsonl(path):
        doc_id = _require(record, "doc_id", path, lineno)
        author = _require(record, "author", path, lineno)
        split = _require(record, "split", path, lineno)
        text = _clean_text(_require(record, "text", path, lineno))
        if doc_id in seen_ids:
            raise DataError(f"{path}:{lineno}: duplicate doc_id {doc_id!r}")
        seen_ids.add(doc_id)
        docs.append(AuthorDoc(doc_id=doc_id, author=author, split=split, text=text))
    train_authors = {d.author for d in docs if d.split == "train"}
    for doc in docs:
        if doc.split == "test" and doc.author not in train_authors:
            raise DataError(
                f"test author {doc.author!r} absent from training set "
                "(closed-set violation)"
            )
    histogram = Counter(d.author for d in docs)
    return AACorpus(docs=docs, author_histogram=histogram)


def _stratified_indices(keys, test_fraction, seed):
    """Core stratified sampler over item indices.

    Strata are the distinct values of `keys`. A stratum of size s >= 2
    contributes round-half-up(s * test_fraction) test items, clamped so
    neither side of that stratum is empty; singleton strata go entirely
    to train with a SplitWarning.
    """
    if not keys:
        raise DataError("cannot split an empty collection")
    if not 0.0 < test_fraction < 1.0:
        raise DataError("test_fraction must lie in (0, 1)")
    strata = {}
    for idx, key in enumerate(keys):
        strata.setdefault(key, []).append(idx)
    rng = random.Random(seed)
    test_idx = set()
    for key in sorted(strata):
        members = strata[key]
        size = len(members)
        if size < 2:
            warnings.warn(
                f"stratum {key!r} has a single member; kept in train",
                SplitWarning,
            )
            continue
        n_test = _round_half_up(size * test_fraction)
        n_test = min(max(n_test, 1), size - 1)
        test_idx.update(rng.sample(members, n_test))
    train = [i for i in range(len(keys)) if i not in test_idx]
    test = [i for i in range(len(keys)) if i in test_idx]
    return train, test


def stratified_split(examples, test_fraction, seed):
    """Split FL examples into (train, test) stratified by label signature."""
    items = list(examples)
    keys = [ex.labels.signature() for ex in items]
    train_idx, test_idx = _stratified_indices(keys, test_fraction, seed)
    train = [replace(items[i], split="train") for i in train_idx]
    test = [replace(items[i], split="test") for i in test_idx]
    return train, test


def split_docs_by_author(docs, test_fraction, seed):
    """Split AA documents into (train, test) stratified by author."""
    items = list(docs)
    keys = [doc.author for doc in items]
    train_idx, test_idx = _stratified_indices(keys, test_fraction, seed)
    train = [replace(items[i], split="train") for i in train_idx]
    test = [replace(items[i], split="test") for i in test_idx]
    return train, test


def merge_predefined_splits(train, dev):
    """Concatenate a predefined dev set onto the training set.

    Dev examples are re-tagged split="train". Id collisions across the
    two inputs are rejected.
    """
    train = list(train)
    dev = list(dev)
    train_ids = {ex.id for ex in train}
    merged = list(train)
    for ex in dev:
        if ex.id in train_ids:
            raise DataError(f"id collision while merging splits: {ex.id!r}")
        train_ids.add(ex.id)
        merged.append(replace(ex, split="train"))
    return merged


def _dump(obj):
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def write_fl_examples(examples, path):
    """Write examples in the canonical examples.jsonl form (sorted labels)."""
    with open(path, "w", encoding="utf-8") as handle:
        for ex in examples:
            handle.write(
                _dump(
                    {
                        "id": ex.id,
                        "dataset": ex.dataset,
                        "split": ex.split,
                        "text": ex.text,
                        "labels": ex.labels.to_label_list(),
                    }
                )
                + "\n"
            )


def write_aa_docs(docs, path):
    """Write AA documents in the canonical docs.jsonl form."""
    with open(path, "w", encoding="utf-8") as handle:
        for doc in docs:
            handle.write(
                _dump(
                    {
                        "doc_id": doc.doc_id,
                        "author": doc.author,
                        "split": doc.split,
                        "text": doc.text,
                    }
                )
                + "\n"
            )
