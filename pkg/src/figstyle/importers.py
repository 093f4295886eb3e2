"""Best-effort converters from public corpus layouts to the JSONL formats.

The canonical interchange formats are examples.jsonl and docs.jsonl
(module corpus); everything downstream consumes only those. These
adapters cover the common on-disk layouts of published AA and
sentence-classification corpora so that a conversion is one function
call, but they make no attempt to chase every distribution variant --
check the converted counts against the corpus documentation.

Layouts covered:

  * review table: one record per line, tab-separated, author id in one
    column and review text in another (the 62-author movie-review corpus
    ships this way);
  * attribution problem folder: candidateNNNNN/ directories holding
    known training texts plus an unknown/ directory and a
    ground-truth.json mapping unknown files to true authors (the
    fan-fiction attribution shared-task layout);
  * generic labeled table: delimited text with configurable id / text /
    label columns, for the many sentence-level datasets distributed as
    CSV/TSV.
"""

import csv
import json
import os

from .corpus import AuthorDoc, Example, _clean_text, _parse_labels
from .errors import DataError

__all__ = [
    "import_review_table",
    "import_attribution_problem",
    "import_labeled_table",
]


def import_review_table(
    path, author_col=1, text_col=-1, delimiter="\t", dataset="reviews"
):
    """Convert a one-review-per-line table into AuthorDocs (all split=train).

    Defaults fit the common 62-author movie-review dump: tab-separated,
    author id in the second column, review text in the last.
    """
    docs = []
    with open(path, "r", encoding="utf-8", errors="replace") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split(delimiter)
            if len(fields) < 2:
                raise DataError(f"{path}:{lineno}: expected delimited fields")
            try:
                author = fields[author_col].strip()
                text = _clean_text(fields[text_col])
            except IndexError:
                raise DataError(f"{path}:{lineno}: missing column")
            if not author or not text:
                raise DataError(f"{path}:{lineno}: empty author or text")
            docs.append(
                AuthorDoc(
                    doc_id=f"{dataset}-{lineno}",
                    author=author,
                    split="train",
                    text=text,
                )
            )
    if not docs:
        raise DataError(f"{path}: no records converted")
    return docs


def import_attribution_problem(problem_dir, encoding="utf-8"):
    """Convert one attribution problem folder into AuthorDocs.

    candidateXXXXX/*.txt become training documents labeled with the
    folder name; unknown/*.txt become test documents with authors taken
    from ground-truth.json ({"ground_truth": [{"unknown-text": ...,
    "true-author": ...}]}).
    """
    truth_path = os.path.join(problem_dir, "ground-truth.json")
    if not os.path.exists(truth_path):
        raise DataError(f"{problem_dir}: missing ground-truth.json")
    with open(truth_path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    truth = {
        entry["unknown-text"]: entry["true-author"]
        for entry in payload.get("ground_truth", [])
    }
    problem = os.path.basename(os.path.normpath(problem_dir))
    docs = []
    for candidate in sorted(os.listdir(problem_dir)):
        candidate_path = os.path.join(problem_dir, candidate)
        if not os.path.isdir(candidate_path):
            continue
        for name in sorted(os.listdir(candidate_path)):
            file_path = os.path.join(candidate_path, name)
            with open(file_path, "r", encoding=encoding, errors="replace") as handle:
                text = _clean_text(handle.read())
            if candidate == "unknown":
                if name not in truth:
                    raise DataError(f"{file_path}: not in ground-truth.json")
                docs.append(
                    AuthorDoc(
                        doc_id=f"{problem}/unknown/{name}",
                        author=truth[name],
                        split="test",
                        text=text,
                    )
                )
            else:
                docs.append(
                    AuthorDoc(
                        doc_id=f"{problem}/{candidate}/{name}",
                        author=candidate,
                        split="train",
                        text=text,
                    )
                )
    if not docs:
        raise DataError(f"{problem_dir}: no documents converted")
    return docs


def import_labeled_table(
    path,
    text_col,
    label_cols,
    dataset,
    id_col=None,
    split="train",
    delimiter=",",
    has_header=True,
):
    """Convert a delimited sentence-classification table into Examples.

    label_cols name columns whose non-empty values are label strings in
    the canonical vocabulary (feature names, not_<feature>, literal);
    anything outside it is dropped and counted, like the JSONL loader.
    Returns (examples, dropped_label_count).
    """
    examples = []
    dropped = 0
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter=delimiter)
        header = next(reader) if has_header else None

        def col(row, key):
            if isinstance(key, int):
                return row[key]
            if header is None:
                raise DataError(f"{path}: named column {key!r} needs a header")
            return row[header.index(key)]

        for lineno, row in enumerate(reader, start=2 if has_header else 1):
            if not row:
                continue
            try:
                text = _clean_text(col(row, text_col))
                raw_labels = [
                    value.strip()
                    for key in label_cols
                    for value in col(row, key).split(";")
                    if value.strip()
                ]
                ex_id = (
                    col(row, id_col).strip()
                    if id_col is not None
                    else f"{dataset}-{lineno}"
                )
            except (IndexError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: bad row ({exc})")
            labels, n_dropped = _parse_labels(raw_labels, f"{path}:{lineno}")
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
    if not examples:
        raise DataError(f"{path}: no records converted")
    return examples, dropped
