"""Word and character n-gram TF-IDF vectorizers, fitted on training text only.

Pipeline, pinned for reproducibility:

  * text is lowercased; accents are preserved;
  * stopwords (the bundled list) are removed before gram extraction --
    the word analyzer drops the tokens, the char analyzer deletes the
    stopword spans from the text and collapses whitespace to single
    spaces; a policy flag can restrict removal to the word analyzer;
  * grams of every length in [n_min, n_max] are pooled into one
    vocabulary: the vocab_size grams with the highest total corpus
    frequency, ties broken lexicographically;
  * idf(g) = ln((1 + D) / (1 + df(g))) + 1 over D training documents;
  * a document vector is raw gram counts times idf, L2-normalized.
    Fully out-of-vocabulary text yields the zero vector.

Fitted state serializes to vectorizer.json (config, ordered vocabulary,
idf array, document count) and round-trips exactly.
"""

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .stylometry import WORD_RE, stopword_set

__all__ = [
    "NgramConfig",
    "FittedVectorizer",
    "fit",
    "transform",
    "char_grams",
    "word_grams",
    "save_vectorizer",
    "load_vectorizer",
]

_WHITESPACE_RE = re.compile(r"\s+")

STOPWORD_POLICIES = ("both", "word_only", "none")


@dataclass(frozen=True)
class NgramConfig:
    analyzer: str = "word"
    n_min: int = 1
    n_max: int = 5
    vocab_size: int = 1024
    stopword_policy: str = "both"

    def __post_init__(self):
        if self.analyzer not in ("word", "char"):
            raise DataError(f"unknown analyzer {self.analyzer!r}")
        if not 1 <= self.n_min <= self.n_max:
            raise DataError("need 1 <= n_min <= n_max")
        if self.vocab_size < 1:
            raise DataError("vocab_size must be at least 1")
        if self.stopword_policy not in STOPWORD_POLICIES:
            raise DataError(
                f"stopword_policy must be one of {STOPWORD_POLICIES}"
            )


@dataclass(frozen=True)
class FittedVectorizer:
    """Frozen vocabulary, per-gram idf weights, and the fit-time doc count."""

    config: NgramConfig
    vocabulary: dict = field(default_factory=dict)
    idf: np.ndarray = None
    doc_count: int = 0

    def __post_init__(self):
        if len(self.vocabulary) > self.config.vocab_size:
            raise DataError("vocabulary exceeds configured size")
        if len(self.idf) != len(self.vocabulary):
            raise DataError("idf array size differs from vocabulary size")

    @property
    def width(self):
        return len(self.vocabulary)


def _word_tokens(text, drop_stopwords):
    tokens = [m.group(0).lower() for m in WORD_RE.finditer(text)]
    if drop_stopwords:
        stopwords = stopword_set()
        tokens = [tok for tok in tokens if tok not in stopwords]
    return tokens


def _char_text(text, drop_stopwords):
    """Lowercased text, optionally with stopword spans deleted; whitespace
    runs collapse to single spaces either way."""
    text = text.lower()
    if drop_stopwords:
        stopwords = stopword_set()
        pieces = []
        last = 0
        for m in WORD_RE.finditer(text):
            if m.group(0) in stopwords:
                pieces.append(text[last : m.start()])
                last = m.end()
        pieces.append(text[last:])
        text = "".join(pieces)
    return _WHITESPACE_RE.sub(" ", text).strip()


def word_grams(tokens, n_min, n_max):
    """Space-joined n-grams over a token sequence, lengths n_min..n_max."""
    grams = []
    for n in range(n_min, n_max + 1):
        grams.extend(
            " ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
        )
    return grams


def char_grams(text, n_range):
    """Sliding-window character n-grams over processed text, spaces included."""
    n_min, n_max = n_range
    grams = []
    for n in range(n_min, n_max + 1):
        grams.extend(text[i : i + n] for i in range(len(text) - n + 1))
    return grams


def _extract_grams(text, config):
    if config.analyzer == "word":
        drop = config.stopword_policy in ("both", "word_only")
        tokens = _word_tokens(text, drop)
        return word_grams(tokens, config.n_min, config.n_max)
    drop = config.stopword_policy == "both"
    processed = _char_text(text, drop)
    return char_grams(processed, (config.n_min, config.n_max))


def fit(train_texts, config):
    """Fit a TF-IDF vectorizer on training texts only.

    Vocabulary: the vocab_size most frequent grams by total corpus count,
    ties lexicographic; idf uses the smoothed formula with the training
    document count. Deterministic and insensitive to document order.
    """
    train_texts = list(train_texts)
    if not train_texts:
        raise DataError("cannot fit a vectorizer on zero documents")
    totals = Counter()
    df = Counter()
    for text in train_texts:
        grams = _extract_grams(text, config)
        totals.update(grams)
        df.update(set(grams))
    if not totals:
        raise DataError("no grams survived filtering; vocabulary is empty")
    selected = sorted(totals, key=lambda g: (-totals[g], g))[: config.vocab_size]
    vocabulary = {gram: idx for idx, gram in enumerate(selected)}
    d = len(train_texts)
    idf = np.array(
        [math.log((1.0 + d) / (1.0 + df[gram])) + 1.0 for gram in selected],
        dtype=np.float64,
    )
    return FittedVectorizer(
        config=config, vocabulary=vocabulary, idf=idf, doc_count=d
    )


def transform(text, fitted):
    """TF-IDF vector for one document: counts * idf, L2-normalized."""
    vec = np.zeros(fitted.width, dtype=np.float64)
    for gram, count in Counter(_extract_grams(text, fitted.config)).items():
        idx = fitted.vocabulary.get(gram)
        if idx is not None:
            vec[idx] = count * fitted.idf[idx]
    norm = np.linalg.norm(vec)
    if norm > 0.0:
        vec /= norm
    return vec


def save_vectorizer(fitted, path):
    payload = {
        "config": {
            "analyzer": fitted.config.analyzer,
            "n_min": fitted.config.n_min,
            "n_max": fitted.config.n_max,
            "vocab_size": fitted.config.vocab_size,
            "stopword_policy": fitted.config.stopword_policy,
        },
        "vocabulary": list(fitted.vocabulary),
        "idf": fitted.idf.tolist(),
        "doc_count": fitted.doc_count,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False)
        handle.write("\n")


def load_vectorizer(path):
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    try:
        config = NgramConfig(**payload["config"])
        vocabulary = {g: i for i, g in enumerate(payload["vocabulary"])}
        idf = np.array(payload["idf"], dtype=np.float64)
        doc_count = payload["doc_count"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: malformed vectorizer file ({exc})")
    return FittedVectorizer(
        config=config, vocabulary=vocabulary, idf=idf, doc_count=doc_count
    )
