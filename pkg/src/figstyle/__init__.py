"""figstyle: figurative-language dataset construction and stylometric
authorship attribution.

Submodules:

  corpus      data model and ingestion (examples.jsonl / docs.jsonl),
              stratified splitting
  importers   best-effort converters from public corpus layouts
  flpipe      balanced binary sets, consistency filtering, threshold
              calibration, gold projection
  stylometry  the 52 stylometric document features
  ngrams      word/char n-gram TF-IDF vectorizers
  embed       external embedding files, pooling, feature matrices
  mlp         from-scratch single-hidden-layer MLP (ReLU, Adam,
              early stopping)
  metrics     weighted F1 and per-class scores
  harness     experiment orchestration and FL scoring conventions
  cli         the `figstyle` command-line entry point
"""

from . import (
    corpus,
    embed,
    flpipe,
    harness,
    importers,
    metrics,
    mlp,
    ngrams,
    stylometry,
)
from .errors import ConfigError, DataError, FigstyleError

__version__ = "0.1.0"

__all__ = [
    "corpus",
    "flpipe",
    "stylometry",
    "ngrams",
    "embed",
    "mlp",
    "metrics",
    "harness",
    "importers",
    "ConfigError",
    "DataError",
    "FigstyleError",
    "__version__",
]
