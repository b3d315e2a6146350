#!/usr/bin/env python3
# Copyright 2026 The Quixer Simulator Authors
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
"""Regenerates data/tiny/{train,valid,test}.txt.

A small stochastic grammar with a ~200 word vocabulary, one sentence per
line in the same whitespace-tokenized, lower-case style as PTB. Output is
fully determined by SEED.
"""

import pathlib
import random

SEED = 20240601

DETS = "the a this that every some".split()
ADJS = ("old new small large red green quiet loud bright dark warm cold young "
        "busy early late happy tired clever simple heavy light quick slow "
        "blue golden silver wooden narrow wide gentle strange famous empty "
        "hidden broken modern ancient proud calm brave polite shiny rusty "
        "sunny rainy noisy lonely lucky clumsy").split()
NOUNS = ("cat dog bird horse farmer teacher doctor child river market city "
         "garden house window door table letter book song story road train "
         "ship bridge tower field forest mountain village kitchen school "
        "sailor baker painter student captain poem map lamp boat wagon "
        "lake valley harbor castle library museum station chair").split()
NAMES = ("anna ben clara david emma frank grace henry iris jack karl lena "
         "maria nina oscar paula quinn rosa sam tara ugo vera will xena yusuf zoe").split()
PRONOUNS = "he she they we".split()
VERBS = {
    # verb -> preferred object nouns, giving a longer-range dependency
    "reads": ["letter", "book", "story", "song"],
    "writes": ["letter", "book", "story", "song"],
    "sings": ["song", "story"],
    "builds": ["house", "bridge", "tower", "table", "road", "ship"],
    "paints": ["house", "door", "window", "table", "tower"],
    "visits": ["city", "market", "village", "school", "garden", "forest"],
    "crosses": ["river", "bridge", "road", "field", "mountain"],
    "feeds": ["cat", "dog", "bird", "horse", "child"],
    "watches": ["cat", "dog", "bird", "horse", "train", "ship", "child"],
    "opens": ["door", "window", "letter", "book", "market", "school"],
    "cleans": ["kitchen", "house", "window", "table", "door"],
    "follows": ["road", "river", "train", "farmer", "teacher", "doctor"],
    "finds": ["book", "letter", "cat", "dog", "road", "village"],
    "sells": ["book", "table", "horse", "ship", "house"],
    "leaves": ["city", "village", "house", "school", "market", "harbor", "station"],
    "draws": ["map", "castle", "boat", "lamp", "valley"],
    "repairs": ["boat", "wagon", "lamp", "chair", "bridge"],
    "teaches": ["student", "child", "sailor", "painter"],
    "guides": ["captain", "sailor", "student", "wagon"],
    "remembers": ["poem", "song", "story", "map", "museum"],
    "explores": ["lake", "valley", "castle", "library", "museum", "harbor"],
    "carries": ["lamp", "chair", "map", "letter", "book"],
    "greets": ["baker", "captain", "teacher", "doctor", "farmer"],
}
PREPS = "in near behind under across beside through inside outside above".split()
PLACES = ["city", "market", "village", "school", "garden", "forest", "kitchen",
          "house", "field", "mountain", "river", "bridge", "lake", "valley",
          "harbor", "castle", "library", "station"]
ADVERBS = ("quickly slowly often rarely carefully quietly happily always "
           "never sometimes gladly proudly").split()
TIMES = "today yesterday tomorrow tonight again soon later".split()
CONJ = "and but while because".split()


def noun_phrase(rng, noun=None):
    words = [rng.choice(DETS)]
    if rng.random() < 0.5:
        words.append(rng.choice(ADJS))
    words.append(noun or rng.choice(NOUNS))
    return words


def subject(rng):
    r = rng.random()
    if r < 0.3:
        return [rng.choice(NAMES)]
    if r < 0.45:
        return [rng.choice(PRONOUNS)]
    return noun_phrase(rng)


def clause(rng):
    words = subject(rng)
    if rng.random() < 0.2:
        words.append(rng.choice(ADVERBS))
    verb = rng.choice(sorted(VERBS))
    words.append(verb)
    words += noun_phrase(rng, rng.choice(VERBS[verb]))
    if rng.random() < 0.5:
        words.append(rng.choice(PREPS))
        words += noun_phrase(rng, rng.choice(PLACES))
    if rng.random() < 0.25:
        words.append(rng.choice(TIMES))
    return words


def sentence(rng):
    words = clause(rng)
    if rng.random() < 0.3:
        words.append(rng.choice(CONJ))
        words += clause(rng)
    # PTB-style rare-word replacement
    return ["<unk>" if rng.random() < 0.01 else w for w in words]


def make_split(rng, target_tokens):
    lines, count = [], 0
    while count < target_tokens:
        s = sentence(rng)
        lines.append(" ".join(s))
        count += len(s) + 1  # + eos
    return lines


def main():
    rng = random.Random(SEED)
    out = pathlib.Path(__file__).resolve().parent / "tiny"
    out.mkdir(exist_ok=True)
    for name, size in (("train", 10000), ("valid", 2000), ("test", 2000)):
        lines = make_split(rng, size)
        (out / f"{name}.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
