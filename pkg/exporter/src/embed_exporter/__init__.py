"""Thin sentence-embedding exporter for the figstyle pipeline.

Segments documents into sentences, encodes them with any pretrained
transformer encoder, mean-pools the last-hidden-layer token states, and
writes the vectors.jsonl format consumed by figstyle.embed.
"""

from .export import ExportError, ExportJob, export, segment_sentences

__version__ = "0.1.0"

__all__ = ["ExportJob", "ExportError", "export", "segment_sentences", "__version__"]
