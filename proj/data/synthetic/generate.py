#!/usr/bin/env python3
# Copyright 2026 The zsre Authors.
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
"""Writes the bundled synthetic corpus (DocRED schema).

Every relation is stated by a sentence containing the literal label phrase,
so descriptions extracted by the stub client carry the label's words. Half
of the labels ("signal") give the tail entity a hypernym built from the
label phrase, but their sentences also name a decoy label, so descriptions
alone are ambiguous for them. The other half ("noise") state only their own
label and get hypernyms of unrelated words. Output is deterministic.
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

# label -> (head type, tail type, tail hypernym noun or None for noise)
SIGNAL = {
    "place of birth": ("PER", "LOC", "birth place"),
    "employer": ("PER", "ORG", "employer company"),
    "founded by": ("ORG", "PER", "founder"),
    "member of sports team": ("PER", "ORG", "sports team"),
    "capital": ("LOC", "LOC", "capital city"),
    "spouse": ("PER", "PER", "spouse"),
    "author": ("MISC", "PER", "author"),
    "headquarters location": ("ORG", "LOC", "headquarters location"),
}
NOISE = {
    "country of citizenship": ("PER", "LOC"),
    "educated at": ("PER", "ORG"),
    "director": ("MISC", "PER"),
    "parent organization": ("ORG", "ORG"),
    "award received": ("PER", "MISC"),
    "instrument": ("PER", "MISC"),
    "publisher": ("MISC", "ORG"),
    "language spoken": ("PER", "MISC"),
}
LABELS = list(SIGNAL) + list(NOISE)

HEAD_NOUN = {"PER": "person", "ORG": "organization", "LOC": "region", "MISC": "work"}
NOISE_WORDS = ["copper", "lantern", "meadow", "velvet", "harbor", "thistle", "granite", "willow",
               "ember", "saffron", "quartz", "marble", "juniper", "cobalt", "falcon", "drift"]

SYLL = ["al", "bre", "cor", "dun", "el", "fen", "gar", "hol", "ir", "jas", "kel", "lor", "mar",
        "nev", "or", "pel", "quin", "ros", "sal", "tor", "ul", "vin", "wex", "yor", "zan"]
SUFFIX = {"PER": [""], "ORG": ["Works", "Guild", "Holdings", "Collective"],
          "LOC": ["Vale", "Ford", "Reach", "Hollow"], "MISC": ["Saga", "Codex", "Chronicle", "Canticle"]}

FILLER = ["The archive was reorganized several times .",
          "Records from that period are incomplete .",
          "Later surveys repeated the same account .",
          "Several letters survive from those years .",
          "The collection was catalogued much later ."]


def name(rng, etype, used):
    while True:
        first = "".join(rng.choice(SYLL) for _ in range(2)).capitalize()
        second = "".join(rng.choice(SYLL) for _ in range(2)).capitalize()
        suffix = rng.choice(SUFFIX[etype])
        n = f"{first} {second}" if etype == "PER" else f"{first} {suffix}"
        if n not in used:
            used.add(n)
            return n


def noise_hypernym(rng):
    return " ".join(rng.sample(NOISE_WORDS, 2))


def main():
    rng = random.Random(20260417)
    used = set()
    lexicon = {}
    docs = []
    label_cycle = []
    for d in range(10):
        # Six relations per document, labels drawn so each appears 3-4 times.
        if len(label_cycle) < 6:
            batch = LABELS[:]
            rng.shuffle(batch)
            label_cycle += batch
        doc_labels, label_cycle = label_cycle[:6], label_cycle[6:]

        sents = []  # list of token lists
        vertex = []
        rels = []

        def add_entity(etype, hyp):
            surface = name(rng, etype, used)
            vertex.append({"surface": surface, "type": etype, "mentions": []})
            lexicon[surface] = hyp
            return len(vertex) - 1

        def mention(idx, sent_tokens, sent_id):
            surface = vertex[idx]["surface"]
            toks = surface.split()
            start = len(sent_tokens)
            sent_tokens.extend(toks)
            vertex[idx]["mentions"].append({"name": surface, "type": vertex[idx]["type"],
                                            "sent_id": sent_id, "pos": [start, start + len(toks)]})

        for k, label in enumerate(doc_labels):
            if label in SIGNAL:
                ht, tt, tail_noun = SIGNAL[label]
                head_hyp = HEAD_NOUN[ht]
                tail_hyp = tail_noun
            else:
                ht, tt = NOISE[label]
                head_hyp = noise_hypernym(rng)
                tail_hyp = noise_hypernym(rng)
            h = add_entity(ht, head_hyp)
            t = add_entity(tt, tail_hyp)
            gap = [0, 0, 1, 2, 3, 4, 5, 7][(d + k) % 8]
            words = label.split()
            if label in SIGNAL:
                decoy = rng.choice([x for x in SIGNAL if x != label]).split()
                words = words + ["or"] + decoy if rng.random() < 0.5 else decoy + ["or"] + words
            if gap == 0:
                s = []
                sid = len(sents)
                mention(h, s, sid)
                s += ["has"] + words + [":"]
                mention(t, s, sid)
                s.append(".")
                sents.append(s)
            else:
                s = []
                sid = len(sents)
                mention(h, s, sid)
                s += ["is", "listed", "in", "the", "register", "."]
                sents.append(s)
                for _ in range(gap - 1):
                    sents.append(rng.choice(FILLER).split())
                s = ["The", "register", "gives"] + words + [":"]
                sid = len(sents)
                mention(t, s, sid)
                s.append(".")
                sents.append(s)
            rels.append({"h": h, "t": t, "r": label, "evidence": []})
            if rng.random() < 0.3:
                sents.append(rng.choice(FILLER).split())
        # One document carries a pair with two gold labels.
        if d == 3:
            first = rels[0]
            extra = "director" if first["r"] != "director" else "publisher"
            rels.append({"h": first["h"], "t": first["t"], "r": extra, "evidence": []})
        docs.append({
            "title": f"Synthetic record {d:02d}",
            "sents": sents,
            "vertexSet": [v["mentions"] for v in vertex],
            "labels": rels,
        })

    with open(os.path.join(HERE, "docs.json"), "w") as f:
        json.dump(docs, f, indent=1)
        f.write("\n")
    with open(os.path.join(HERE, "hypernyms.json"), "w") as f:
        json.dump(lexicon, f, indent=1, sort_keys=True)
        f.write("\n")
    with open(os.path.join(HERE, "labels.txt"), "w") as f:
        for label in sorted(LABELS):
            f.write(label + "\n")
    with open(os.path.join(HERE, "signal_labels.txt"), "w") as f:
        for label in sorted(SIGNAL):
            f.write(label + "\n")


if __name__ == "__main__":
    main()
