"""The 52 stylometric document features, computed from scratch.

Families, in fixed slot order: surface averages, character-class and
word-list ratios, frequency-spectrum ratios, sixteen readability indices,
sixteen lexical-richness measures, and six threshold ratios. Every
formula and constant is pinned in FORMULAS.md at the repository root;
the word lists in figstyle/assets are versioned inputs to the stopword,
functional-word, and easy-word counts.

Tokenization is deterministic and self-contained: sentences end at
terminal punctuation (. ! ?) followed by whitespace or end of text, and
word tokens are maximal alphanumeric runs joined by internal apostrophes.
Character-class counts are taken on the raw text; tokens are lowercased.

Degenerate inputs never produce non-finite values: single-type or
single-token documents fall back to 0 for the affected richness metrics
(see FORMULAS.md for the exact guard list).
"""

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import DataError

__all__ = [
    "FEATURE_NAMES",
    "TokenizedDoc",
    "FrequencySpectrum",
    "StyloVector",
    "tokenize",
    "count_syllables",
    "frequency_spectrum",
    "compute_surface_and_ratio_metrics",
    "compute_readability_metrics",
    "compute_lexical_richness_metrics",
    "compute_word_frequency_class",
    "compute_stylo_vector",
    "build_corpus_frequencies",
    "stopword_set",
    "functional_word_set",
    "easy_word_set",
    "write_stylo_vectors",
]

WORD_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)
SENTENCE_BOUNDARY_RE = re.compile(r"(?<=[.!?])\s+")
VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")

# Slot order of the document vector. Fixed; append-only in spirit, but the
# vector is pinned at exactly 52 entries.
FEATURE_NAMES = (
    "avg_word_length_chars",
    "avg_syllables_per_word",
    "avg_sentence_length_words",
    "avg_sentence_length_chars",
    "avg_word_frequency_class",
    "type_token_ratio",
    "digit_ratio",
    "punctuation_ratio",
    "uppercase_ratio",
    "special_char_ratio",
    "stopword_ratio",
    "functional_word_ratio",
    "hapax_legomena_ratio",
    "hapax_dislegomena_ratio",
    "automated_readability_index",
    "flesch_reading_ease",
    "flesch_kincaid_grade",
    "dale_chall",
    "new_dale_chall",
    "spache",
    "gunning_fog",
    "lix",
    "rix",
    "fernandez_huerta",
    "szigriszt_pazos",
    "crawford",
    "mcalpine_eflaw",
    "guiraud_r",
    "herdan_c",
    "dugast_k",
    "maas_a2",
    "dugast_u",
    "tuldava_ln",
    "brunet_w",
    "cttr",
    "summer_s",
    "sichel_s",
    "michea_m",
    "honore_h",
    "shannon_entropy",
    "yule_k",
    "simpson_d",
    "herdan_vm",
    "coleman_liau",
    "linsear_write",
    "smog",
    "word_length_gt5_ratio",
    "word_length_le5_ratio",
    "syllables_gt2_ratio",
    "syllables_le2_ratio",
    "sentence_length_gt17_ratio",
    "sentence_length_le17_ratio",
)

RATIO_FEATURES = frozenset(
    name for name in FEATURE_NAMES if name.endswith("_ratio")
) | {"type_token_ratio"}


def _load_word_set(asset):
    path = resources.files("figstyle").joinpath(f"assets/{asset}.txt")
    return frozenset(path.read_text(encoding="utf-8").split())


@lru_cache(maxsize=None)
def stopword_set():
    return _load_word_set("stopwords")


@lru_cache(maxsize=None)
def functional_word_set():
    return _load_word_set("functional_words")


@lru_cache(maxsize=None)
def easy_word_set():
    return _load_word_set("easy_words")


@dataclass(frozen=True)
class TokenizedDoc:
    """Sentence/token decomposition plus raw character-class counts."""

    sentences: list
    tokens: list
    n_chars: int
    n_upper: int
    n_digit: int
    n_punct: int
    n_special: int
    syllables: list


@dataclass(frozen=True)
class FrequencySpectrum:
    """Census of a token multiset: N tokens, V types, V_i types seen i times."""

    n_tokens: int
    n_types: int
    spectrum: dict = field(default_factory=dict)

    @property
    def v1(self):
        return self.spectrum.get(1, 0)

    @property
    def v2(self):
        return self.spectrum.get(2, 0)


@dataclass(frozen=True)
class StyloVector:
    """The 52-slot document vector, slot order given by FEATURE_NAMES."""

    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(FEATURE_NAMES),):
            raise DataError(
                f"stylometric vector must have {len(FEATURE_NAMES)} slots"
            )
        if not np.all(np.isfinite(self.values)):
            raise DataError("stylometric vector contains non-finite values")

    def as_dict(self):
        return dict(zip(FEATURE_NAMES, self.values.tolist()))

    def __getitem__(self, name):
        return float(self.values[FEATURE_NAMES.index(name)])


def _char_category(ch):
    import unicodedata

    return unicodedata.category(ch)


def tokenize(text):
    """Split text into sentences and lowercase word tokens.

    Sentences end at . ! or ? followed by whitespace or end of text;
    segments without any word token are discarded. Word tokens are
    maximal alphanumeric runs, with apostrophes kept when they join two
    alphanumeric runs ("don't" is one token, "b-c" is two).
    """
    if not text or not text.strip():
        raise DataError("cannot tokenize empty text")
    sentences = []
    for segment in SENTENCE_BOUNDARY_RE.split(text):
        tokens = [m.group(0).lower() for m in WORD_RE.finditer(segment)]
        if tokens:
            sentences.append(tokens)
    flat = [tok for sent in sentences for tok in sent]
    if not flat:
        raise DataError("text contains no word tokens")
    n_upper = n_digit = n_punct = n_special = 0
    for ch in text:
        if ch.isupper():
            n_upper += 1
        if ch.isdigit():
            n_digit += 1
        if _char_category(ch).startswith("P"):
            n_punct += 1
        elif not ch.isalnum() and not ch.isspace():
            n_special += 1
    return TokenizedDoc(
        sentences=sentences,
        tokens=flat,
        n_chars=len(text),
        n_upper=n_upper,
        n_digit=n_digit,
        n_punct=n_punct,
        n_special=n_special,
        syllables=[count_syllables(tok) for tok in flat],
    )


def count_syllables(word):
    """Heuristic syllable count: vowel groups (aeiouy) minus a silent final e.

    The final e is dropped only when it forms a vowel group of its own at
    the very end of the word and is not the only group. Never below 1.
    """
    if not word:
        raise DataError("cannot count syllables of an empty token")
    word = word.lower()
    groups = VOWEL_GROUP_RE.findall(word)
    count = len(groups)
    if count > 1 and word.endswith("e") and groups[-1] == "e":
        count -= 1
    return max(count, 1)


def frequency_spectrum(tokens):
    """Exact multiset census of a token sequence."""
    tokens = list(tokens)
    if not tokens:
        raise DataError("cannot build a spectrum from zero tokens")
    counts = Counter(tokens)
    spectrum = Counter(counts.values())
    return FrequencySpectrum(
        n_tokens=len(tokens), n_types=len(counts), spectrum=dict(spectrum)
    )


def compute_surface_and_ratio_metrics(doc, spectrum):
    """Surface averages, character-class ratios, and threshold ratios."""
    n_words = len(doc.tokens)
    n_sents = len(doc.sentences)
    if n_sents == 0:
        raise DataError("document has no sentences")
    word_chars = sum(len(tok) for tok in doc.tokens)
    total_syllables = sum(doc.syllables)
    stopwords = stopword_set()
    functional = functional_word_set()
    n_stop = sum(1 for tok in doc.tokens if tok in stopwords)
    n_func = sum(1 for tok in doc.tokens if tok in functional)
    long_words = sum(1 for tok in doc.tokens if len(tok) > 5)
    poly_words = sum(1 for s in doc.syllables if s > 2)
    long_sents = sum(1 for sent in doc.sentences if len(sent) > 17)
    return {
        "avg_word_length_chars": word_chars / n_words,
        "avg_syllables_per_word": total_syllables / n_words,
        "avg_sentence_length_words": n_words / n_sents,
        "avg_sentence_length_chars": word_chars / n_sents,
        "type_token_ratio": spectrum.n_types / spectrum.n_tokens,
        "digit_ratio": doc.n_digit / doc.n_chars,
        "punctuation_ratio": doc.n_punct / doc.n_chars,
        "uppercase_ratio": doc.n_upper / doc.n_chars,
        "special_char_ratio": doc.n_special / doc.n_chars,
        "stopword_ratio": n_stop / n_words,
        "functional_word_ratio": n_func / n_words,
        "hapax_legomena_ratio": spectrum.v1 / spectrum.n_tokens,
        "hapax_dislegomena_ratio": spectrum.v2 / spectrum.n_tokens,
        "word_length_gt5_ratio": long_words / n_words,
        "word_length_le5_ratio": (n_words - long_words) / n_words,
        "syllables_gt2_ratio": poly_words / n_words,
        "syllables_le2_ratio": (n_words - poly_words) / n_words,
        "sentence_length_gt17_ratio": long_sents / n_sents,
        "sentence_length_le17_ratio": (n_sents - long_sents) / n_sents,
    }


def compute_readability_metrics(doc):
    """The sixteen readability indices. Formulas pinned in FORMULAS.md."""
    n_words = len(doc.tokens)
    n_sents = len(doc.sentences)
    word_chars = sum(len(tok) for tok in doc.tokens)
    letters = sum(1 for tok in doc.tokens for ch in tok if ch.isalpha())
    total_syllables = sum(doc.syllables)
    asl = n_words / n_sents
    spw = total_syllables / n_words
    easy = easy_word_set()
    difficult = sum(1 for tok in doc.tokens if tok not in easy)
    pct_difficult = 100.0 * difficult / n_words
    unfamiliar_types = sum(1 for tok in set(doc.tokens) if tok not in easy)
    poly = sum(1 for s in doc.syllables if s >= 3)
    long6 = sum(1 for tok in doc.tokens if len(tok) > 6)
    mini = sum(1 for tok in doc.tokens if len(tok) <= 3)

    dale_chall = 0.1579 * pct_difficult + 0.0496 * asl
    if pct_difficult > 5.0:
        dale_chall += 3.6365
    linsear_points = sum(1 if s < 3 else 3 for s in doc.syllables)
    linsear_r = linsear_points / n_sents
    linsear = linsear_r / 2.0 if linsear_r > 20.0 else linsear_r / 2.0 - 1.0
    return {
        "automated_readability_index": (
            4.71 * word_chars / n_words + 0.5 * asl - 21.43
        ),
        "flesch_reading_ease": 206.835 - 1.015 * asl - 84.6 * spw,
        "flesch_kincaid_grade": 0.39 * asl + 11.8 * spw - 15.59,
        "dale_chall": dale_chall,
        "new_dale_chall": 64.0 - 0.95 * pct_difficult - 0.69 * asl,
        "spache": (
            0.141 * asl + 0.086 * (100.0 * unfamiliar_types / n_words) + 0.839
        ),
        "gunning_fog": 0.4 * (asl + 100.0 * poly / n_words),
        "lix": asl + 100.0 * long6 / n_words,
        "rix": long6 / n_sents,
        "fernandez_huerta": 206.84 - 60.0 * spw - 1.02 * asl,
        "szigriszt_pazos": 206.835 - 62.3 * spw - asl,
        "crawford": (
            -0.205 * (100.0 * n_sents / n_words)
            + 0.049 * (100.0 * total_syllables / n_words)
            - 3.407
        ),
        "mcalpine_eflaw": (n_words + mini) / n_sents,
        "coleman_liau": (
            0.0588 * (100.0 * letters / n_words)
            - 0.296 * (100.0 * n_sents / n_words)
            - 15.8
        ),
        "linsear_write": linsear,
        "smog": 1.0430 * math.sqrt(poly * 30.0 / n_sents) + 3.1291,
    }


def compute_lexical_richness_metrics(spectrum):
    """The sixteen lexical-richness measures over a frequency spectrum.

    Natural logarithms throughout except Shannon entropy (log2). Guards
    for degenerate inputs (N = 1, V = 1, V = N, V2 = 0) emit 0 instead of
    infinities; the full guard table is in FORMULAS.md.
    """
    n = spectrum.n_tokens
    v = spectrum.n_types
    v1 = spectrum.v1
    v2 = spectrum.v2
    sum_i2_vi = sum(i * i * vi for i, vi in spectrum.spectrum.items())

    log_n = math.log(n) if n > 1 else 0.0
    log_v = math.log(v) if v > 1 else 0.0

    guiraud_r = v / math.sqrt(n)
    cttr = v / math.sqrt(2.0 * n)
    brunet_w = n ** (v ** -0.165)
    herdan_c = log_v / log_n if n > 1 else 0.0
    dugast_k = log_v / math.log(log_n) if n > 1 else 0.0
    maas_a2 = (log_n - log_v) / (log_n * log_n) if n > 1 else 0.0
    dugast_u = (log_n * log_n) / (log_n - log_v) if n > 1 and v < n else 0.0
    tuldava_ln = (1.0 - v * v) / (v * v * log_n) if n > 1 else 0.0
    summer_s = math.log(log_v) / math.log(log_n) if n > 1 and v > 1 else 0.0
    sichel_s = v2 / v if v2 else 0.0
    michea_m = v / v2 if v2 else 0.0
    honore_h = 100.0 * log_n / (1.0 - v1 / v) if v1 < v else 0.0
    yule_k = 1.0e4 * (sum_i2_vi - n) / (n * n)
    simpson_d = (
        sum(
            vi * (i / n) * ((i - 1) / (n - 1))
            for i, vi in spectrum.spectrum.items()
        )
        if n > 1
        else 0.0
    )
    herdan_vm = math.sqrt(max(sum_i2_vi / (n * n) - 1.0 / v, 0.0))
    entropy = -sum(
        vi * (i / n) * math.log2(i / n) for i, vi in spectrum.spectrum.items()
    )
    return {
        "guiraud_r": guiraud_r,
        "herdan_c": herdan_c,
        "dugast_k": dugast_k,
        "maas_a2": maas_a2,
        "dugast_u": dugast_u,
        "tuldava_ln": tuldava_ln,
        "brunet_w": brunet_w,
        "cttr": cttr,
        "summer_s": summer_s,
        "sichel_s": sichel_s,
        "michea_m": michea_m,
        "honore_h": honore_h,
        "shannon_entropy": entropy,
        "yule_k": yule_k,
        "simpson_d": simpson_d,
        "herdan_vm": herdan_vm,
    }


def compute_word_frequency_class(doc, corpus_freq):
    """Mean word-frequency class of the document's tokens.

    class(w) = floor(log2(f(w*) / f(w))) with w* the most frequent token
    of the reference corpus; tokens unseen in the corpus get f = 1.
    """
    if not corpus_freq:
        raise DataError("empty corpus frequency table")
    f_star = max(corpus_freq.values())
    classes = [
        math.floor(math.log2(f_star / corpus_freq.get(tok, 1)))
        for tok in doc.tokens
    ]
    return sum(classes) / len(classes)


def build_corpus_frequencies(texts):
    """Token frequency table over a text collection (the training split)."""
    freq = Counter()
    for text in texts:
        freq.update(m.group(0).lower() for m in WORD_RE.finditer(text))
    return dict(freq)


def compute_stylo_vector(text, corpus_freq):
    """Assemble the full 52-slot stylometric vector for one document."""
    doc = tokenize(text)
    spectrum = frequency_spectrum(doc.tokens)
    values = {}
    values.update(compute_surface_and_ratio_metrics(doc, spectrum))
    values.update(compute_readability_metrics(doc))
    values.update(compute_lexical_richness_metrics(spectrum))
    values["avg_word_frequency_class"] = compute_word_frequency_class(
        doc, corpus_freq
    )
    vector = np.array([values[name] for name in FEATURE_NAMES], dtype=np.float64)
    return StyloVector(values=vector)


def write_stylo_vectors(doc_ids, vectors, path):
    """Write stylo.jsonl: one {"doc_id", "vector"} record per document."""
    with open(path, "w", encoding="utf-8") as handle:
        for doc_id, vec in zip(doc_ids, vectors):
            record = {"doc_id": doc_id, "vector": vec.values.tolist()}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
