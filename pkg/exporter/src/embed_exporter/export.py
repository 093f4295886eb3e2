"""Document -> per-sentence embedding export.

Reads a docs.jsonl or examples.jsonl corpus, splits each document into
sentences, encodes the sentences with a pretrained transformer encoder,
mean-pools the last-hidden-layer token states (every non-padding token,
including the leading special token), and writes one vectors.jsonl record
per document:

    {"id": <doc id>, "sentences": [[float, ...], ...]}

Values are rounded to float32 before serialization, so identical inputs
and model produce identical files. A sidecar log (<output>.log) records
per-document anomalies: sentences truncated at the encoder's maximum
length, and documents with no sentences at all (those get a single
all-zero row so downstream consumers keep one row per document minimum).

Sentence segmentation matches the convention used on the consuming side:
sentences end at . ! or ? followed by whitespace or end of text, and a
segment must contain at least one word token (a maximal alphanumeric run,
apostrophes joining) to count.
"""

import json
import re
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = ["ExportJob", "ExportError", "export", "segment_sentences"]

WORD_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)
SENTENCE_BOUNDARY_RE = re.compile(r"(?<=[.!?])\s+")


class ExportError(Exception):
    pass


@dataclass
class ExportJob:
    input_path: str
    model_id: str
    output_path: str
    batch_size: int = 32
    device: str = "cpu"
    pooling: str = "token-mean"

    def __post_init__(self):
        if self.pooling != "token-mean":
            raise ExportError(f"unsupported pooling {self.pooling!r}")
        if self.batch_size < 1:
            raise ExportError("batch_size must be at least 1")


def segment_sentences(text):
    """Sentence strings in document order; segments need a word token."""
    sentences = []
    for segment in SENTENCE_BOUNDARY_RE.split(text):
        segment = segment.strip()
        if segment and WORD_RE.search(segment):
            sentences.append(segment)
    return sentences


def _read_corpus(path):
    """Yield (doc_id, text) from docs.jsonl or examples.jsonl."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ExportError(f"{path}:{lineno}: malformed JSON ({exc.msg})")
            doc_id = record.get("doc_id", record.get("id"))
            text = record.get("text")
            if not isinstance(doc_id, str) or not isinstance(text, str):
                raise ExportError(
                    f"{path}:{lineno}: record needs a doc_id/id and text"
                )
            yield doc_id, text


def _load_encoder(model_id, device):
    import torch
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModel.from_pretrained(model_id)
    except Exception as exc:
        raise ExportError(f"cannot load encoder {model_id!r}: {exc}")
    model.eval()
    model.to(device)
    return torch.no_grad, tokenizer, model


def _encode_batch(tokenizer, model, sentences, device, max_length):
    """Mean-pooled sentence vectors plus per-sentence truncation flags."""
    import torch

    plain = tokenizer(sentences, truncation=False)["input_ids"]
    truncated = [len(ids) > max_length for ids in plain]
    enc = tokenizer(
        sentences,
        padding=True,
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    ).to(device)
    with torch.no_grad():
        hidden = model(**enc).last_hidden_state
    mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
    pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1)
    return pooled.cpu().numpy(), truncated


def _float32_row(row):
    return [float(v) for v in np.asarray(row, dtype=np.float32)]


def export(job):
    """Run one export job; returns a summary dict.

    Summary keys: documents, sentences, dim, truncated_sentences,
    empty_documents. Per-document sentence counts are in sentence_counts.
    """
    _, tokenizer, model = _load_encoder(job.model_id, job.device)
    dim = model.config.hidden_size
    max_length = min(
        getattr(tokenizer, "model_max_length", 512),
        getattr(model.config, "max_position_embeddings", 512),
    )
    summary = {
        "documents": 0,
        "sentences": 0,
        "dim": dim,
        "truncated_sentences": 0,
        "empty_documents": 0,
        "sentence_counts": {},
    }
    log_path = job.output_path + ".log"
    with open(job.output_path, "w", encoding="utf-8") as out, open(
        log_path, "w", encoding="utf-8"
    ) as log:
        for doc_id, text in _read_corpus(job.input_path):
            sentences = segment_sentences(text)
            if not sentences:
                warnings.warn(f"document {doc_id!r} has no sentences")
                log.write(f"{doc_id}\tempty-document\n")
                summary["empty_documents"] += 1
                rows = [_float32_row(np.zeros(dim))]
            else:
                rows = []
                for start in range(0, len(sentences), job.batch_size):
                    batch = sentences[start : start + job.batch_size]
                    pooled, truncated = _encode_batch(
                        tokenizer, model, batch, job.device, max_length
                    )
                    for offset, flag in enumerate(truncated):
                        if flag:
                            log.write(
                                f"{doc_id}\ttruncated-sentence:{start + offset}\n"
                            )
                            summary["truncated_sentences"] += 1
                    rows.extend(_float32_row(row) for row in pooled)
            out.write(
                json.dumps({"id": doc_id, "sentences": rows}) + "\n"
            )
            summary["documents"] += 1
            summary["sentences"] += len(rows) if sentences else 0
            summary["sentence_counts"][doc_id] = len(rows)
    return summary
