#!/usr/bin/env python3
# Copyright 2026 The Phonoloop Authors
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
"""Writes the standard campaign fixture (inventory, lexicon, templates, JSON).

The output is committed; rerunning with the same arguments reproduces it.
"""

import argparse
import json
import pathlib
import random

CONSONANTS = ["p", "b", "t", "d", "k", "g", "m", "n", "s", "z", "f", "v", "l", "r"]
VOWELS = ["aa", "iy", "uw", "eh", "ah", "ow"]
SPELLING = {"aa": "a", "iy": "ee", "uw": "oo", "eh": "e", "ah": "u", "ow": "o"}

LITERALS = [("the", "d ah"), ("a", "ah"), ("and", "ah n d"), ("to", "t uw"), ("on", "aa n")]

TEMPLATES = [
    "the <adj> <noun> <verb> the <noun>",
    "a <noun> and a <noun> <verb>",
    "the <noun> <verb> to the <adj> <noun>",
    "<noun> <verb> the <adj> <noun>",
    "the <adj> <noun> and the <noun> <verb>",
    "a <adj> <noun> <verb> on the <noun>",
]

SHAPES = [("CVCV", 0.5), ("CVC", 0.2), ("CVCVC", 0.3)]


def zipf_weights(n, exponent):
    return [1.0 / (rank + 1) ** exponent for rank in range(n)]


def random_word(rng, c_weights, v_weights):
    r = rng.random()
    for shape, weight in SHAPES:
        if r < weight:
            break
        r -= weight
    return tuple(
        rng.choices(CONSONANTS, c_weights)[0] if ch == "C" else rng.choices(VOWELS, v_weights)[0]
        for ch in shape
    )


def neighbour(rng, pron):
    pos = rng.randrange(len(pron))
    pool = CONSONANTS if pron[pos] in CONSONANTS else VOWELS
    out = list(pron)
    out[pos] = rng.choice([p for p in pool if p != pron[pos]])
    return tuple(out)


def spell(pron):
    return "".join(SPELLING.get(p, p) for p in pron)


def build(seed, n_words, family_rate, phoneme_zipf):
    rng = random.Random(seed)
    c_weights = zipf_weights(len(CONSONANTS), phoneme_zipf)
    v_weights = zipf_weights(len(VOWELS), phoneme_zipf)
    rng.shuffle(c_weights)
    rng.shuffle(v_weights)
    used_prons = {tuple(p.split()) for _, p in LITERALS}
    used_words = {w for w, _ in LITERALS}
    words = []
    while len(words) < n_words - len(LITERALS):
        if words and rng.random() < family_rate:
            pron = neighbour(rng, rng.choice(words)[1])
        else:
            pron = random_word(rng, c_weights, v_weights)
        word = spell(pron)
        if pron in used_prons or word in used_words:
            continue
        used_prons.add(pron)
        used_words.add(word)
        words.append((word, pron))
    categories = ["noun"] * (len(words) // 2) + ["verb"] * (len(words) // 4)
    categories += ["adj"] * (len(words) - len(categories))
    rng.shuffle(categories)
    return words, categories


def word_weights(rng, n, exponent):
    weights = [max(1, round(1000 / (rank + 1) ** exponent)) for rank in range(n)]
    rng.shuffle(weights)
    return weights


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).parent / "standard"))
    ap.add_argument("--seed", type=int, default=20260417)
    ap.add_argument("--words", type=int, default=200)
    ap.add_argument("--family-rate", type=float, default=0.5)
    ap.add_argument("--phoneme-zipf", type=float, default=1.0)
    ap.add_argument("--weight-zipf", type=float, default=1.0)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    words, categories = build(args.seed, args.words, args.family_rate, args.phoneme_zipf)
    weights = word_weights(random.Random(args.seed + 1), len(words), args.weight_zipf)

    (out / "inventory.txt").write_text("\n".join(CONSONANTS + VOWELS) + "\n")
    lines = ["# word\tphonemes\tweight\tcategory"]
    lines += [f"{w}\t{p}\t1000\t" for w, p in LITERALS]
    lines += [f"{w}\t{' '.join(p)}\t{x}\t{c}" for (w, p), c, x in zip(words, categories, weights)]
    (out / "lexicon.tsv").write_text("\n".join(lines) + "\n")
    (out / "templates.txt").write_text("\n".join(TEMPLATES) + "\n")
    fixture = {
        "version": 1,
        "inventory": "inventory.txt",
        "lexicon": "lexicon.tsv",
        "templates": "templates.txt",
        "speaker": {"n_difficult": 5, "severity": 0.8},
        "rounds": 15,
        "prompts_per_round": 10,
        "policy": "oracle_all",
        "seed_base": 1,
        "seeds": 20,
        "target_fraction": 0.5,
        "profile": {
            "passes": 10,
            "cold_start_budget": 8,
            "eval_words": 100,
            "eval_renderings": 3,
        },
    }
    (out / "standard.json").write_text(json.dumps(fixture, indent=2) + "\n")


if __name__ == "__main__":
    main()
