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
"""Generates the checked-in toy corpus under data/toy/.

The corpus is a 400-comment, perfectly separable two-class dataset used by
the end-to-end acceptance checks:

  * 200 OFFENSIVE and 200 NOT_OFFENSIVE comments (ids toy_0001..toy_0400),
  * each comment carries 1-3 signal words drawn only from its own class's
    signal set plus 3-8 shared neutral words,
  * the signal sets are disjoint, so counting signal tokens classifies the
    cleaned corpus with 100% accuracy (the generator verifies this),
  * raw text is decorated with noise that normalization provably removes:
    @handles, URLs, digit runs, punctuation, emoji, random casing, and
    inflected English forms that the lemma lexicon maps back to base forms.

The script is deterministic (fixed seed) and self-checking: it mirrors the
pipeline's normalize() on the raw text and asserts the result equals the
intended clean text before writing anything.

Usage: python3 tools/gen_toy_corpus.py   (from the repository root)
"""

import random
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

OFF_SIGNALS = [
    "mokka", "waste", "bore", "mosam", "kevalam",
    "veruppu", "thendi", "poda", "chali", "thallu",
]
NOT_SIGNALS = [
    "semma", "adipoli", "kidu", "polichu", "mass",
    "superb", "nalla", "kalakki", "veralevel", "thakarppan",
]
NEUTRAL = [
    "padam", "pattu", "trailer", "hero", "heroine", "cinema", "anna",
    "machan", "chetta", "story", "climax", "scene", "teaser", "director",
    "actor", "fan", "theatre", "release", "paathu", "kandu", "oru",
    "intha", "athu", "ithu", "enna", "eppo", "repeat", "day",
]

# Inflected renderings the lexicon maps back to the base word. Only safe for
# words whose base form is in the toy vocabulary.
INFLECTIONS = {
    "fan": ["fans"],
    "story": ["stories"],
    "scene": ["scenes"],
    "trailer": ["trailers"],
    "release": ["releases", "released"],
    "day": ["days"],
    "actor": ["actors"],
    "hero": ["heroes"],
}

STANDALONE_NOISE = [
    "@user{0}", "@fan_page{0}", "http://t.co/v{0}", "https://youtu.be/x{0}",
    "www.example.com/clip{0}", "{0}", "100", ":-)", "<3", "!!!", "&&",
    "\U0001F600", "\U0001F44D",
]

WORD_PUNCT = ["!", "!!", "...", "?", ",", ".", "!!!"]


def load_lexicon(path):
    lex = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        key, value = line.split("\t")
        lex[key] = value
    return lex


def mirror_normalize(text, lexicon):
    """Python mirror of the pipeline's normalize() for the noise generated
    here (ASCII words, ASCII noise, emoji)."""
    text = re.sub(r"(https?://|www\.)\S+", " ", text, flags=re.IGNORECASE)
    text = re.sub(r"@\w+", " ", text)
    out = []
    pending_space = False
    for ch in text:
        if ch.isspace():
            pending_space = True
            continue
        # The toy corpus contains only ASCII letters plus non-letter noise
        # (digits, punctuation, emoji), so the ASCII test is exact here.
        if not ("a" <= ch <= "z" or "A" <= ch <= "Z"):
            continue
        if pending_space and out:
            out.append(" ")
        pending_space = False
        out.append(ch.lower())
    tokens = "".join(out).split(" ")
    tokens = [lexicon.get(t, t) for t in tokens if t]
    return " ".join(tokens)


def decorate(word, rng):
    """Renders one clean word as raw text: maybe inflected, recased, or with
    punctuation attached."""
    raw = word
    if word in INFLECTIONS and rng.random() < 0.25:
        raw = rng.choice(INFLECTIONS[word])
    roll = rng.random()
    if roll < 0.05:
        raw = raw.upper()
    elif roll < 0.25:
        raw = raw.capitalize()
    if rng.random() < 0.30:
        raw = raw + rng.choice(WORD_PUNCT)
    return raw


def main():
    lexicon = load_lexicon(ROOT / "data" / "lexicon" / "english.tsv")

    words = OFF_SIGNALS + NOT_SIGNALS + NEUTRAL
    assert len(set(words)) == len(words), "toy word lists overlap"
    for w in words:
        assert lexicon.get(w, w) == w, f"toy word {w!r} is not a lexicon fixed point"
    for base, forms in INFLECTIONS.items():
        for form in forms:
            assert lexicon.get(form) == base, f"lexicon lacks {form!r} -> {base!r}"

    rng = random.Random(20250341)
    rows = []
    for i in range(400):
        label = "OFF" if i % 2 == 0 else "NOT"
        signals = OFF_SIGNALS if label == "OFF" else NOT_SIGNALS
        others = NOT_SIGNALS if label == "OFF" else OFF_SIGNALS

        chosen = [rng.choice(NEUTRAL) for _ in range(rng.randint(3, 8))]
        chosen += [rng.choice(signals) for _ in range(rng.randint(1, 3))]
        rng.shuffle(chosen)
        clean = " ".join(chosen)

        pieces = []
        for w in chosen:
            if pieces and rng.random() < 0.12:
                pieces.append(rng.choice(STANDALONE_NOISE).format(rng.randint(2, 9999)))
            pieces.append(decorate(w, rng))
        sep = lambda: "  " if rng.random() < 0.06 else " "
        raw = pieces[0]
        for p in pieces[1:]:
            raw += sep() + p

        mirrored = mirror_normalize(raw, lexicon)
        assert mirrored == clean, f"row {i}: {mirrored!r} != {clean!r}\nraw: {raw!r}"
        assert "\t" not in raw and "\n" not in raw
        assert any(t in signals for t in clean.split()), f"row {i} lacks a signal"
        assert not any(t in others for t in clean.split()), f"row {i} leaks a signal"
        rows.append((f"toy_{i + 1:04d}", raw, label, clean))

    # Brute-force check: counting own-class signal tokens classifies the
    # cleaned corpus perfectly.
    correct = 0
    for _, _, label, clean in rows:
        toks = clean.split()
        off = sum(t in OFF_SIGNALS for t in toks)
        noff = sum(t in NOT_SIGNALS for t in toks)
        pred = "OFF" if off > noff else "NOT"
        correct += pred == label
    assert correct == len(rows), f"token-count classifier: {correct}/{len(rows)}"

    out_dir = ROOT / "data" / "toy"
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "train.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\ttext\tlabel\n")
        for rid, raw, label, _ in rows:
            fh.write(f"{rid}\t{raw}\t{label}\n")

    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"] + sorted(words)
    with open(out_dir / "vocab.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(vocab) + "\n")

    n_off = sum(1 for r in rows if r[2] == "OFF")
    print(f"wrote {len(rows)} rows ({n_off} OFF / {len(rows) - n_off} NOT), "
          f"vocab of {len(vocab)} tokens")


if __name__ == "__main__":
    sys.exit(main())
