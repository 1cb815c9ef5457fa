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
"""Independent reference implementation used to freeze golden values.

Written from the documented behavior only (no shared code with the C++
library): MT19937-64, the SHA-256 keyed mock encoder, the extractive stub
side information, the seven similarity components, confidence, dynamic
weighted score, unseen-label sampling, confusion-matrix macro F1 and the
sentence-gap table.

  python3 zsre_oracle.py --dataset ../../data/synthetic/docs.json \
      --lexicon ../../data/synthetic/hypernyms.json --out golden.json
"""

import argparse
import hashlib
import json
import math
import struct

MASK64 = (1 << 64) - 1


class MT19937_64:
    """Reference 64-bit Mersenne Twister (Matsumoto & Nishimura, 2004)."""

    NN, MM = 312, 156
    MATRIX_A = 0xB5026F5AA96619E9
    UM, LM = 0xFFFFFFFF80000000, 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.NN
        self.mt[0] = seed & MASK64
        for i in range(1, self.NN):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK64
        self.mti = self.NN

    def _twist(self):
        mt, nn, mm = self.mt, self.NN, self.MM
        for i in range(nn):
            x = (mt[i] & self.UM) | (mt[(i + 1) % nn] & self.LM)
            xa = x >> 1
            if x & 1:
                xa ^= self.MATRIX_A
            mt[i] = mt[(i + mm) % nn] ^ xa
        self.mti = 0

    def next(self):
        if self.mti >= self.NN:
            self._twist()
        x = self.mt[self.mti]
        self.mti += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x ^= (x << 37) & 0xFFF7EEE000000000
        x ^= x >> 43
        return x & MASK64


# ---- mock encoder ------------------------------------------------------------

def key_vector(key, dim, seed):
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    engine = MT19937_64(struct.unpack("<Q", digest[:8])[0] ^ seed)
    unit = 2.0 ** -53
    v = [0.0] * dim
    for i in range(0, dim, 2):
        u1 = ((engine.next() >> 11) + 1) * unit
        u2 = (engine.next() >> 11) * unit
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        v[i] = r * math.cos(theta)
        if i + 1 < dim:
            v[i + 1] = r * math.sin(theta)
    return v


def word_tokens(text):
    out, cur = [], []
    for ch in text.encode("utf-8"):
        if ch >= 0x80 or chr(ch).isalnum():
            cur.append(chr(ch).lower() if ch < 0x80 else chr(ch))
        elif cur:
            out.append(cur)
            cur = []
    if cur:
        out.append(cur)
    # Keep raw bytes for non-ASCII so the key matches byte-for-byte.
    return ["".join(t).encode("latin-1").decode("utf-8", "surrogateescape") for t in out]


class MockEncoder:
    def __init__(self, dim, seed):
        self.dim, self.seed = dim, seed
        self.memo = {}

    def _kv(self, key):
        if key not in self.memo:
            self.memo[key] = key_vector(key, self.dim, self.seed)
        return self.memo[key]

    def encode(self, text):
        acc = [0.0] * self.dim
        for tok in word_tokens(text):
            v = self._kv("tok\x1f" + tok)
            for i in range(self.dim):
                acc[i] += v[i]
        whole = key_vector("txt\x1f" + text, self.dim, self.seed)
        for i in range(self.dim):
            acc[i] += 0.5 * whole[i]
        norm = math.sqrt(sum(x * x for x in acc))
        return [x / norm for x in acc]


# ---- scoring -----------------------------------------------------------------

WEIGHTS = [0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]
TOL = 1e-9


def cosine(u, v):
    dot = uu = vv = 0.0
    for a, b in zip(u, v):
        dot += a * b
        uu += a * a
        vv += b * b
    return min(1.0, max(-1.0, dot / (math.sqrt(uu) * math.sqrt(vv))))


def confidence(c, exclude_context=False):
    s = c[:6] if exclude_context else c
    mean = sum(s) / len(s)
    pstdev = math.sqrt(sum((x - mean) * (x - mean) for x in s) / len(s))
    return min(1.0, max(0.0, (mean + (1.0 - pstdev)) / 2.0))


def weighted(c, w=WEIGHTS):
    total = 0.0
    for wi, ci in zip(w, c):
        total += wi * ci
    return total


def mode_score(c, mode):
    if mode == "desc_only":
        return c[0]
    if mode == "desc_hypernym":
        return (c[0] + c[1] + c[2]) / 3.0
    if mode == "desc_type":
        return (c[0] + c[3] + c[4]) / 3.0
    if mode == "desc_hyp_type":
        return (c[0] + c[1] + c[2] + c[3] + c[4]) / 5.0
    return weighted(c) * confidence(c)


def argmax(scores):
    best = max(scores)
    return next(i for i, s in enumerate(scores) if s >= best - TOL)


# ---- side information (extractive stub) ----------------------------------------

def collapse(s):
    return " ".join(s.split())


def truncate(desc, max_chars=512):
    if len(desc.encode("utf-8")) <= max_chars:
        return desc
    cut = desc.rfind(" ", 0, max_chars + 1)
    if cut <= 0:
        cut = max_chars
    return desc[:cut].strip()


def normalize_hypernym(raw, surface):
    h = next((l.strip() for l in raw.split("\n") if l.strip()), "")
    h = collapse(h).lower()
    if h.startswith("hypernym:"):
        h = h[9:].strip()
    sl = collapse(surface).lower()
    if sl and h.startswith(sl + " is "):
        h = h[len(sl) + 4:]
    junk = ".,;:!?\"'`*"

    def edges(s):
        s = s.rstrip(junk + " ")
        return s.lstrip("\"'`* ")

    h = edges(h)
    changed = True
    while changed:
        changed = False
        for art in ("a ", "an ", "the "):
            if h.startswith(art):
                h = h[len(art):]
                changed = True
        h = edges(h)
    return h


def side_info(doc, lexicon):
    sents = [" ".join(s) for s in doc["sents"]]
    out = []
    for ent in doc["vertexSet"]:
        surface, etype = ent[0]["name"], ent[0]["type"]
        hits = [s.strip() for s in sents if surface in s]
        desc = " ".join(hits) if hits else f"{surface} is a {etype.lower()}."
        hyp_raw = lexicon.get(surface, etype.lower() + " entity")
        out.append({"surface": surface, "type": etype,
                    "description": truncate(collapse(desc)),
                    "hypernym": normalize_hypernym(hyp_raw, surface)})
    return out


def pair_texts(h, t, verbatim=False):
    tail_role = "a subject" if verbatim else "an object"
    return [
        f"Head entity: {h['description']} Tail entity: {t['description']}",
        h["hypernym"], t["hypernym"], h["type"], t["type"],
        f"{h['type']} acting as a subject, described as {h['hypernym']}",
        f"{t['type']} acting as {tail_role}, described as {t['hypernym']}",
        f"Relation between {h['hypernym']} and {t['hypernym']}",
    ]


def components(vecs, label_vec):
    return [
        cosine(vecs[0], label_vec), cosine(vecs[1], label_vec), cosine(vecs[2], label_vec),
        cosine(vecs[3], label_vec), cosine(vecs[4], label_vec),
        (cosine(vecs[5], label_vec) + cosine(vecs[6], label_vec)) / 2.0,
        cosine(vecs[7], label_vec),
    ]


# ---- evaluation ----------------------------------------------------------------

def run_seed(master, n, k):
    return (master + 1000003 * n + k) & MASK64


def bounded(engine, rng):
    threshold = ((1 << 64) - rng) % rng
    while True:
        x = engine.next()
        if x >= threshold:
            return x % rng


def sample(inventory, n, seed):
    idx = list(range(len(inventory)))
    engine = MT19937_64(seed)
    for i in range(n):
        j = i + bounded(engine, len(idx) - i)
        idx[i], idx[j] = idx[j], idx[i]
    return [inventory[i] for i in sorted(idx[:n])]


def macro_f1_confusion(gold, pred, labelset):
    """Macro F1 from an explicit confusion matrix (rows gold, cols pred)."""
    pos = {l: i for i, l in enumerate(labelset)}
    m = [[0] * len(labelset) for _ in labelset]
    for g, p in zip(gold, pred):
        m[pos[g]][pos[p]] += 1
    f1s = []
    for i in range(len(labelset)):
        tp = m[i][i]
        fp = sum(m[r][i] for r in range(len(labelset))) - tp
        fn = sum(m[i]) - tp
        den = 2 * tp + fp + fn
        f1s.append(0.0 if den == 0 else 2 * tp / den)
    return sum(f1s) / len(f1s)


def pvariance(xs):
    mean = sum(xs) / len(xs)
    return sum((x - mean) * (x - mean) for x in xs) / len(xs)


def gap_of(doc, h, t):
    return min(abs(a["sent_id"] - b["sent_id"]) for a in doc["vertexSet"][h] for b in doc["vertexSet"][t])


def evaluate(docs, lexicon, seed, sizes, samples, modes, dim=768):
    enc = MockEncoder(dim, seed)
    memo = {}

    def embed(text):
        if text not in memo:
            memo[text] = enc.encode(text)
        return memo[text]

    inventory = sorted({r["r"] for d in docs for r in d["labels"]})
    label_vecs = {l: embed(collapse(l.replace("_", " ").lower())) for l in inventory}
    pairs = []
    for d in docs:
        info = side_info(d, lexicon)
        seen = []
        for r in d["labels"]:
            if (r["h"], r["t"]) not in seen:
                seen.append((r["h"], r["t"]))
        for h, t in seen:
            golds = [r["r"] for r in d["labels"] if r["h"] == h and r["t"] == t]
            vecs = [embed(x) for x in pair_texts(info[h], info[t])]
            comps = {l: components(vecs, label_vecs[l]) for l in inventory}
            pairs.append({"golds": golds, "comps": comps, "gap": gap_of(d, h, t)})

    result = {}
    for mode in modes:
        per_size = []
        for n in sizes:
            f1s, labels_per_run, gap_counts = [], [], [[0, 0] for _ in range(6)]
            for k in range(samples):
                unseen = sample(inventory, n, run_seed(seed, n, k))
                gold, pred = [], []
                for p in pairs:
                    if not any(g in unseen for g in p["golds"]):
                        continue
                    scores = [mode_score(p["comps"][l], mode) for l in unseen]
                    winner = unseen[argmax(scores)]
                    for g in p["golds"]:
                        if g in unseen:
                            gold.append(g)
                            pred.append(winner)
                            b = min(p["gap"], 5)
                            gap_counts[b][0] += 1
                            gap_counts[b][1] += int(g == winner)
                f1s.append(macro_f1_confusion(gold, pred, unseen))
                labels_per_run.append(unseen)
            per_size.append({"size": n, "f1s": f1s, "mean_f1": sum(f1s) / len(f1s),
                             "variance": pvariance(f1s), "labels": labels_per_run,
                             "gap_totals": [c[0] for c in gap_counts],
                             "gap_correct": [c[1] for c in gap_counts]})
        result[mode] = per_size
    return result


def fixtures():
    """Small values frozen into the unit tests."""
    enc = MockEncoder(768, 0)
    v = enc.encode("x")
    kv = key_vector("tok\x1fx", 8, 0)
    a = enc.encode("place of birth")
    b = enc.encode("Head entity: born in the place of birth")
    c = enc.encode("copper lantern")
    return {
        "key_vector_tok_x_dim8_seed0": kv,
        "mock_x_norm": math.sqrt(sum(x * x for x in v)),
        "mock_x_first4": v[:4],
        "cos_label_vs_sharing_text": cosine(a, b),
        "cos_label_vs_unrelated": cosine(a, c),
        "mt19937_64_seed5489_first3": (lambda e: [e.next() for _ in range(3)])(MT19937_64(5489)),
        "sample_16_5_seed42": sample([f"L{i:02d}" for i in range(16)], 5, 42),
        "run_seed_13_5_2": run_seed(13, 5, 2),
        "confidence_all_0.4": confidence([0.4] * 7),
        "dws_all_0.5": weighted([0.5] * 7) * confidence([0.5] * 7),
        "dws_0.9_0.5x6": weighted([0.9] + [0.5] * 6) * confidence([0.9] + [0.5] * 6),
        "confidence_0.9_0.5x6": confidence([0.9] + [0.5] * 6),
        "macro_f1_AAB_ABB": macro_f1_confusion(["A", "A", "B"], ["A", "B", "B"], ["A", "B"]),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dataset", required=True)
    ap.add_argument("--lexicon", required=True)
    ap.add_argument("--seed", type=int, default=13)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    docs = json.load(open(args.dataset))
    lexicon = json.load(open(args.lexicon))
    golden = {
        "seed": args.seed,
        "sizes": [5, 10, 15],
        "samples_per_size": 3,
        "eval": evaluate(docs, lexicon, args.seed, [5, 10, 15], 3,
                         ["desc_only", "desc_hypernym", "desc_type", "desc_hyp_type", "full_weighted"]),
        "fixtures": fixtures(),
    }
    with open(args.out, "w") as f:
        json.dump(golden, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
