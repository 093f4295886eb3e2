import random

from figstyle.corpus import (
    AuthorDoc,
    Example,
    LabelAssertions,
    split_docs_by_author,
)

FILLER = (
    "the story moves along and people talk about the weather for a time "
    "before anything happens at all"
).split()


def synthetic_aa_docs(n_authors=5, docs_per_author=40, seed=0):
    """Author-disjoint content vocabulary plus shared filler words.

    Each author owns twelve unique content words; documents mix them with
    common filler, so both word- and character-level features separate
    the classes while surface statistics stay similar.
    """
    rng = random.Random(seed)
    docs = []
    for a in range(n_authors):
        content = [f"{w}{a}zq" for w in (
            "marble", "violet", "ember", "quill", "harbor", "saddle",
            "tundra", "cobalt", "lantern", "meadow", "rocket", "willow",
        )]
        for i in range(docs_per_author):
            words = []
            for _ in range(rng.randint(35, 60)):
                if rng.random() < 0.55:
                    words.append(rng.choice(content))
                else:
                    words.append(rng.choice(FILLER))
            sentences = []
            while words:
                take, words = words[:8], words[8:]
                sentences.append(" ".join(take).capitalize() + ".")
            docs.append(
                AuthorDoc(
                    doc_id=f"a{a}_d{i}",
                    author=f"author{a}",
                    split="train",
                    text=" ".join(sentences),
                )
            )
    train, test = split_docs_by_author(docs, 0.1, seed=seed)
    return train + test


def make_example(ex_id, labels=(), literal=False, split="train", text=None):
    assertions = {}
    for label in labels:
        if label.startswith("not_"):
            assertions[label[4:]] = False
        else:
            assertions[label] = True
    return Example(
        id=ex_id,
        dataset="synthetic",
        split=split,
        text=text or f"Synthetic sentence number {ex_id}.",
        labels=LabelAssertions(assertions=assertions, literal=literal),
    )


