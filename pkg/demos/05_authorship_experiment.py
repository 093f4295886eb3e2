"""Walkthrough: a complete authorship-attribution experiment.

Builds a synthetic five-author corpus (each author owns a private content
vocabulary on top of shared filler), then runs the full experiment
pipeline -- feature fitting on the training split only, MLP training
with early stopping, weighted-F1 evaluation -- for several feature sets,
including a concatenation with random stand-in "embedding" vectors.
"""

import json
import os
import random
import tempfile

import numpy as np

from figstyle.corpus import AuthorDoc, split_docs_by_author, write_aa_docs
from figstyle.embed import write_doc_vectors
from figstyle.harness import ExperimentSpec, run_experiment
from figstyle.mlp import TrainConfig

rng = random.Random(0)
FILLER = "the story moves along and people talk about the weather for a time".split()

docs = []
for author in range(5):
    content = [f"{w}{author}zq" for w in (
        "marble", "violet", "ember", "quill", "harbor", "saddle",
        "tundra", "cobalt", "lantern", "meadow", "rocket", "willow",
    )]
    for i in range(40):
        words = [
            rng.choice(content) if rng.random() < 0.55 else rng.choice(FILLER)
            for _ in range(rng.randint(35, 60))
        ]
        sentences = [
            " ".join(words[k : k + 8]).capitalize() + "."
            for k in range(0, len(words), 8)
        ]
        docs.append(
            AuthorDoc(
                doc_id=f"a{author}_d{i}",
                author=f"author{author}",
                split="train",
                text=" ".join(sentences),
            )
        )

train, test = split_docs_by_author(docs, 0.1, seed=0)
workdir = tempfile.mkdtemp(prefix="aa_demo_")
corpus_path = os.path.join(workdir, "docs.jsonl")
write_aa_docs(train + test, corpus_path)
print(f"corpus: {len(train)} train / {len(test)} test documents -> {corpus_path}")

# stand-in document embeddings: random vectors, one per doc (a real run
# would point at an exported vectors.jsonl instead)
np_rng = np.random.default_rng(1)
ids = [d.doc_id for d in train + test]
vectors_path = os.path.join(workdir, "vectors.jsonl")
write_doc_vectors(ids, np_rng.normal(size=(len(ids), 64)), vectors_path)

train_config = TrainConfig(
    hidden_units=1024, learning_rate=0.05, max_epochs=300, patience=25
)

results = {}
for features in (["stylo"], ["char_tfidf"], ["word_tfidf"], ["char_tfidf", "embedding:rand"]):
    spec = ExperimentSpec(
        corpus=corpus_path,
        features=features,
        train=train_config,
        seed=3,
        embeddings={"rand": vectors_path},
        output_dir=os.path.join(workdir, "+".join(features).replace(":", "_")),
    )
    report = run_experiment(spec)
    results[report.feature_spec] = report.weighted_f1
    print(
        f"{report.feature_spec:32s} weighted F1 = {report.weighted_f1:.3f} "
        f"({report.train_report['epochs_run']} epochs, "
        f"{report.runtime_seconds:.1f}s)"
    )

print("\nper-experiment artifacts (report.json, model.json):")
for name in sorted(os.listdir(workdir)):
    path = os.path.join(workdir, name)
    if os.path.isdir(path):
        print(f"  {path}: {sorted(os.listdir(path))}")

best = max(results, key=results.get)
print(f"\nbest feature set here: {best}")
print(json.dumps(results, indent=2))
