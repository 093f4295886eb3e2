import os

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.pre_tokenizers import Whitespace
from tokenizers.processors import TemplateProcessing
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

WORDS = [
    "the", "cat", "sat", "on", "mat", "dog", "ran", "fast", "a", "and",
    "story", "about", "people", "time", "day", "harbor", "marble",
]


@pytest.fixture(scope="session")
def tiny_encoder_dir(tmp_path_factory):
    """A local 768-dim, 2-layer random-weight encoder saved to disk.

    Stands in for any pretrained model identifier: the exporter loads it
    through the same from_pretrained path it would use for a hub name.
    """
    base = tmp_path_factory.mktemp("tiny_encoder")
    vocab = {tok: i for i, tok in enumerate(
        ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + WORDS
    )}
    tok_model = Tokenizer(WordPiece(vocab=vocab, unk_token="[UNK]"))
    tok_model.pre_tokenizer = Whitespace()
    tok_model.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=tok_model,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
        model_max_length=16,
    )
    torch.manual_seed(1234)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=768,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=512,
        max_position_embeddings=16,
    )
    model = BertModel(config)
    model_dir = os.path.join(str(base), "encoder")
    model.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    return model_dir


@pytest.fixture
def write_docs(tmp_path):
    import json

    def _write(records, name="docs.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record) + "\n")
        return str(path)

    return _write
