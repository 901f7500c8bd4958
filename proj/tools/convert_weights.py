#!/usr/bin/env python3
# Copyright 2026 The offmix Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts a Hugging Face BERT checkpoint to the offmix OMW1 weights format.

Typical use, pointing configs/hasoc_pretrained.conf at the outputs:

    pip install torch transformers
    python3 tools/convert_weights.py \
        --model bert-base-multilingual-cased \
        --out-weights weights/encoder.bin \
        --out-vocab weights/vocab.txt

`--model` accepts a hub name or a local checkpoint directory. Only the plain
BERT encoder family is supported: absolute position embeddings, post-layer
norm, erf-based GELU. The pooler is dropped; offmix reads the sentence
representation straight from the last hidden state at position 0, so only
the embedding tables and the transformer blocks are converted.

OMW1 layout (all integers little-endian uint32, floats little-endian f32):

    "OMW1" | version=1
    vocab_size hidden layers heads intermediate max_position
    then per tensor: rows cols data[rows*cols]   (row-major)

Tensor order: tok_emb, pos_emb, seg_emb, emb_ln_g, emb_ln_b, then per layer
wq bq wk bk wv bv wo bo ln1_g ln1_b w1 b1 w2 b2 ln2_g ln2_b. Weight matrices
are stored input x output (the encoder computes x @ W), so each torch
nn.Linear weight, which is output x input, is transposed on the way out.
"""

import argparse
import struct
import sys
from pathlib import Path

MAGIC = b"OMW1"
VERSION = 1

SENTINELS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]")


def write_tensor(out, array):
    """Writes one rows/cols/data record. 1-D arrays become a single row."""
    import numpy as np

    a = np.asarray(array, dtype="<f4")
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a 1-D or 2-D tensor, got shape {a.shape}")
    out.write(struct.pack("<II", a.shape[0], a.shape[1]))
    out.write(np.ascontiguousarray(a).tobytes())


def tensor_plan(layers):
    """Yields (state_dict key, transpose?) pairs in OMW1 tensor order."""
    yield "embeddings.word_embeddings.weight", False
    yield "embeddings.position_embeddings.weight", False
    yield "embeddings.token_type_embeddings.weight", False
    yield "embeddings.LayerNorm.weight", False
    yield "embeddings.LayerNorm.bias", False
    for i in range(layers):
        p = f"encoder.layer.{i}."
        yield p + "attention.self.query.weight", True
        yield p + "attention.self.query.bias", False
        yield p + "attention.self.key.weight", True
        yield p + "attention.self.key.bias", False
        yield p + "attention.self.value.weight", True
        yield p + "attention.self.value.bias", False
        yield p + "attention.output.dense.weight", True
        yield p + "attention.output.dense.bias", False
        yield p + "attention.output.LayerNorm.weight", False
        yield p + "attention.output.LayerNorm.bias", False
        yield p + "intermediate.dense.weight", True
        yield p + "intermediate.dense.bias", False
        yield p + "output.dense.weight", True
        yield p + "output.dense.bias", False
        yield p + "output.LayerNorm.weight", False
        yield p + "output.LayerNorm.bias", False


def check_architecture(config):
    problems = []
    if getattr(config, "model_type", None) != "bert":
        problems.append(f"model_type is {config.model_type!r}, need 'bert'")
    if getattr(config, "hidden_act", "gelu") != "gelu":
        problems.append(
            f"hidden_act is {config.hidden_act!r}; only the erf-based 'gelu' "
            "matches the offmix encoder")
    pos = getattr(config, "position_embedding_type", "absolute")
    if pos != "absolute":
        problems.append(f"position_embedding_type is {pos!r}, need 'absolute'")
    if config.hidden_size % config.num_attention_heads != 0:
        problems.append("hidden_size is not divisible by the head count")
    if problems:
        raise SystemExit("unsupported checkpoint:\n  " + "\n  ".join(problems))


def load_vocab(model_name):
    """Returns the wordpiece vocabulary in id order.

    The checkpoint's own vocab.txt is authoritative: line index == token id
    is exactly the contract the offmix vocabulary loader assumes. Falling
    back to tokenizer APIs that rebuild the mapping (get_vocab and friends)
    can silently misnumber ids when a checkpoint carries added tokens, so
    the file is preferred whenever it exists.
    """
    local = Path(model_name) / "vocab.txt"
    if local.is_file():
        return local.read_text(encoding="utf-8").splitlines()

    import tempfile
    from transformers import AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_name)
    with tempfile.TemporaryDirectory() as tmp:
        files = tokenizer.save_vocabulary(tmp)
        vocab_file = next(
            (f for f in files if f and f.endswith("vocab.txt")), None)
        if vocab_file is None:
            raise SystemExit(
                "tokenizer did not produce a wordpiece vocab.txt; only "
                "BERT-style wordpiece checkpoints are supported")
        return Path(vocab_file).read_text(encoding="utf-8").splitlines()


def convert(model_name, out_weights, out_vocab):
    from transformers import AutoConfig, AutoModel

    config = AutoConfig.from_pretrained(model_name)
    check_architecture(config)

    model = AutoModel.from_pretrained(model_name)
    state = {k: v.detach().cpu().numpy() for k, v in model.state_dict().items()}
    # AutoModel for a bare BertModel yields keys without the "bert." prefix;
    # a checkpoint saved from a task head keeps it. Accept both.
    if not any(k.startswith("embeddings.") for k in state):
        state = {k.removeprefix("bert."): v for k, v in state.items()}

    vocab = load_vocab(model_name)
    missing = [s for s in SENTINELS if s not in set(vocab)]
    if missing:
        raise SystemExit(f"tokenizer vocabulary lacks sentinels: {missing}")

    n_vocab, hidden = state["embeddings.word_embeddings.weight"].shape
    if n_vocab != len(vocab):
        # Some checkpoints pad the embedding table past the tokenizer's
        # vocabulary; the extra rows are unreachable, so pad the written
        # vocabulary with distinct placeholders to keep ids aligned.
        if n_vocab < len(vocab):
            raise SystemExit(
                f"embedding table has {n_vocab} rows but the tokenizer "
                f"defines {len(vocab)} tokens")
        print(f"note: padding vocabulary from {len(vocab)} to {n_vocab} "
              "tokens to match the embedding table")
        vocab += [f"[unused_pad_{i}]" for i in range(len(vocab), n_vocab)]

    dims = (
        n_vocab,
        config.hidden_size,
        config.num_hidden_layers,
        config.num_attention_heads,
        config.intermediate_size,
        config.max_position_embeddings,
    )
    if hidden != config.hidden_size:
        raise SystemExit("embedding width disagrees with config.hidden_size")

    out_weights.parent.mkdir(parents=True, exist_ok=True)
    with open(out_weights, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<7I", VERSION, *dims))
        for key, transpose in tensor_plan(config.num_hidden_layers):
            if key not in state:
                raise SystemExit(f"checkpoint is missing tensor {key!r}")
            tensor = state[key]
            write_tensor(f, tensor.T if transpose else tensor)

    out_vocab.parent.mkdir(parents=True, exist_ok=True)
    with open(out_vocab, "w", encoding="utf-8", newline="\n") as f:
        for token in vocab:
            f.write(token + "\n")

    weights_mb = out_weights.stat().st_size / 1e6
    print(f"wrote {out_weights} ({weights_mb:.1f} MB) and {out_vocab} "
          f"({n_vocab} tokens)")
    print(f"dims: vocab={dims[0]} hidden={dims[1]} layers={dims[2]} "
          f"heads={dims[3]} intermediate={dims[4]} max_position={dims[5]}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="convert a Hugging Face BERT checkpoint to OMW1")
    parser.add_argument(
        "--model", required=True,
        help="Hugging Face model name or local checkpoint directory")
    parser.add_argument(
        "--out-weights", required=True, type=Path,
        help="output OMW1 weights file (e.g. weights/encoder.bin)")
    parser.add_argument(
        "--out-vocab", required=True, type=Path,
        help="output wordpiece vocabulary, one token per line")
    args = parser.parse_args(argv)
    try:
        convert(args.model, args.out_weights, args.out_vocab)
    except ImportError as e:
        raise SystemExit(
            f"missing dependency ({e.name}); install with: "
            "pip install torch transformers numpy") from e
    return 0


if __name__ == "__main__":
    sys.exit(main())
