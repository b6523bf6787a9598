#!/usr/bin/env python3
"""Straight-line reference implementation used to generate expected test data.

It shares no code with the C++ library: WordNet parsing, Wu-Palmer similarity,
Bloom-level assignment by silhouette width, verb detection, the hashing
embedding, grid blending and the credit decision are all restated here from
their definitions.

    golden_oracle.py golden --manifest M --out expected.json
    golden_oracle.py silhouette --verbs verbs.txt --out expected.json
"""

import argparse
import json
import math
import os
import string
from collections import deque

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.normpath(os.path.join(HERE, "..", ".."))
STOP_VERBS = ("be", "have", "do", "use")


# ---------------------------------------------------------------- WordNet

def read_wordnet(directory):
    hypernyms = {}
    with open(os.path.join(directory, "data.verb"), encoding="utf-8") as f:
        for line in f:
            if line.startswith(" ") or not line.strip():
                continue
            head = line.split(" | ")[0].split()
            offset = int(head[0])
            w_cnt = int(head[3], 16)
            pos = 4 + 2 * w_cnt
            p_cnt = int(head[pos])
            pos += 1
            parents = []
            for _ in range(p_cnt):
                symbol, target, target_pos = head[pos], int(head[pos + 1]), head[pos + 2]
                pos += 4
                if symbol == "@" and target_pos == "v" and target not in parents:
                    parents.append(target)
            hypernyms[offset] = parents
    senses = {}
    with open(os.path.join(directory, "index.verb"), encoding="utf-8") as f:
        for line in f:
            if line.startswith(" ") or not line.strip():
                continue
            fields = line.split()
            synset_cnt = int(fields[2])
            senses[fields[0]] = [int(x) for x in fields[-synset_cnt:]]
    return hypernyms, senses


class Taxonomy:
    ROOT = 0

    def __init__(self, directory):
        self.hypernyms, self.senses = read_wordnet(directory)
        self.up_cache = {}
        self.depth = {}
        for s in self.hypernyms:
            self.depth[s] = self.up(s)[self.ROOT]

    def parents(self, s):
        if s == self.ROOT:
            return []
        return self.hypernyms[s] or [self.ROOT]

    def up(self, s):
        """Shortest upward edge count from s to each of its ancestors (and itself)."""
        if s in self.up_cache:
            return self.up_cache[s]
        dist = {s: 0}
        queue = deque([s])
        while queue:
            n = queue.popleft()
            for p in self.parents(n):
                if p not in dist:
                    dist[p] = dist[n] + 1
                    queue.append(p)
        self.up_cache[s] = dist
        return dist

    def depth_of(self, s):
        return 0 if s == self.ROOT else self.depth[s]

    def wup(self, a, b):
        up_a, up_b = self.up(a), self.up(b)
        best = None
        for c in up_a:
            if c not in up_b:
                continue
            key = (-self.depth_of(c), up_a[c] + up_b[c], c)
            if best is None or key < best:
                best = key
        c = best[2]
        d_lcs = self.depth_of(c)
        d_a = d_lcs + up_a[c]
        d_b = d_lcs + up_b[c]
        if d_a + d_b == 0:
            return 0.0
        return 2.0 * d_lcs / (d_a + d_b)

    def wup_max(self, v1, v2):
        if v1 not in self.senses or v2 not in self.senses:
            return None
        best = 0.0
        for a in self.senses[v1]:
            for b in self.senses[v2]:
                best = max(best, self.wup(a, b))
        return best


# ---------------------------------------------------------------- Bloom levels

def read_seeds(path):
    clusters = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.split("#")[0].strip()
            if not line:
                continue
            if line.startswith("["):
                level = int(line[1:line.index("]")])
                clusters.append((level, []))
            else:
                clusters[-1][1].extend(line.replace(",", " ").split())
    return clusters


def silhouette(tax, clusters, verb):
    means = []
    for _, seeds in clusters:
        dists = []
        for seed in seeds:
            sim = tax.wup_max(verb, seed)
            if sim is not None:
                dists.append(1.0 - sim)
        total = 0.0
        for d in dists:
            total += d
        means.append(total / len(dists) if dists else None)
    scores = []
    for k, a in enumerate(means):
        if a is None:
            scores.append(None)
            continue
        others = [m for j, m in enumerate(means) if j != k and m is not None]
        b = min(others) if others else None
        if b is None or max(a, b) == 0:
            scores.append(0.0)
        else:
            scores.append((b - a) / max(a, b))
    best_level, best_score = None, None
    for (level, _), s in zip(clusters, scores):
        if s is not None and (best_score is None or s > best_score):
            best_level, best_score = level, s
    return best_level, scores


def assign(tax, clusters, verb):
    for level, seeds in clusters:
        if verb in seeds:
            return level
    if verb not in tax.senses:
        return None
    return silhouette(tax, clusters, verb)[0]


# ---------------------------------------------------------------- detection

def strip_word(word):
    keep = lambda c: c.isascii() and (c.isalnum() or c in "_-")
    start, end = 0, len(word)
    while start < end and not keep(word[start]):
        start += 1
    while end > start and not keep(word[end - 1]):
        end -= 1
    return word[start:end].lower()


def lemma_of(tax, word):
    base = strip_word(word)
    if not base:
        return None
    if base in tax.senses:
        return base

    def stem_hit(stem):
        if stem in tax.senses:
            return stem
        if stem + "e" in tax.senses:
            return stem + "e"
        if len(stem) >= 3 and stem[-1] == stem[-2] and stem[:-1] in tax.senses:
            return stem[:-1]
        return None

    rules = [("ies", "y"), ("es", ""), ("s", ""), ("ied", "y"), ("ed", ""), ("ing", "")]
    for suffix, repl in rules:
        if len(base) > len(suffix) + 1 and base.endswith(suffix):
            hit = stem_hit(base[: -len(suffix)] + repl)
            if hit:
                return hit
    return None


def detect(tax, text):
    tokens, word = [], ""
    for ch in text:
        if ch.isspace():
            if word and strip_word(word):
                tokens.append(strip_word(word))
            word = ""
        elif ch in ",.;:!?":
            if word and strip_word(word):
                tokens.append(strip_word(word))
            word = ""
            tokens.append(ch)
        else:
            word += ch
    if word and strip_word(word):
        tokens.append(strip_word(word))

    verbs = []
    for i, tok in enumerate(tokens):
        if len(tok) == 1 and tok in string.punctuation:
            continue
        prev = tokens[i - 1] if i > 0 else None
        if not (prev is None or prev in ".;:!?" or prev in ("to", "and", ",")):
            continue
        lemma = lemma_of(tax, tok)
        if lemma is None or lemma in STOP_VERBS or lemma in verbs:
            continue
        verbs.append(lemma)
    return verbs


# ---------------------------------------------------------------- embedding

def embed(text):
    vec = [0.0] * 64
    token = ""
    for ch in text + " ":
        if ch.isascii() and ch.isalnum():
            token += ch.lower()
        elif token:
            h = 14695981039346656037
            for byte in token.encode("ascii"):
                h ^= byte
                h = (h * 1099511628211) % (1 << 64)
            vec[h % 64] += 1.0
            token = ""
    return vec


def cosine(a, b):
    dot = sa = sb = 0.0
    for x, y in zip(a, b):
        dot += x * y
        sa += x * x
        sb += y * y
    return max(-1.0, min(1.0, dot / math.sqrt(sa * sb)))


# ---------------------------------------------------------------- pipeline

def round6(v):
    r = math.floor(abs(v) * 1e6 + 0.5) / 1e6
    return -r if v < 0 and r != 0 else r


def assess(tax, clusters, receiving, sending, impact, sim_threshold, lo_threshold):
    def levels(course):
        out = []
        for lo in course["learning_outcomes"]:
            lv = [assign(tax, clusters, v) for v in detect(tax, lo["text"])]
            lv = [x for x in lv if x is not None]
            out.append(max(lv) if lv else None)
        return out

    rl, sl = levels(receiving), levels(sending)
    rlos, slos = receiving["learning_outcomes"], sending["learning_outcomes"]
    tax_grid, sem_grid, fin_grid = [], [], []
    for i, r in enumerate(rlos):
        trow, srow, frow = [], [], []
        for j, s in enumerate(slos):
            t = 0.5 if rl[i] is None or sl[j] is None else 1 - abs(rl[i] - sl[j]) / 5
            c = cosine(embed(r["text"]), embed(s["text"]))
            w = impact / 100.0
            f = min(1.0, max(0.0, (1.0 - w) * c + w * t))
            trow.append(t)
            srow.append(c)
            frow.append(f)
        tax_grid.append(trow)
        sem_grid.append(srow)
        fin_grid.append(frow)

    matched_rows = []
    for i, row in enumerate(fin_grid):
        best = max(range(len(row)), key=lambda j: (row[j], -j))
        if row[best] >= sim_threshold:
            matched_rows.append([rlos[i]["id"], slos[best]["id"], round6(row[best])])
    m = len(rlos)
    decision = "yes" if len(matched_rows) * 1_000_000 >= round(lo_threshold * 1_000_000) * m else "no"

    grid = lambda g: [[round6(v) for v in row] for row in g]
    return {
        "decision": decision,
        "matched_count": len(matched_rows),
        "matched_rows": matched_rows,
        "levels": {
            "receiving": {lo["id"]: lv for lo, lv in zip(rlos, rl)},
            "sending": {lo["id"]: lv for lo, lv in zip(slos, sl)},
        },
        "taxonomic": grid(tax_grid),
        "semantic": grid(sem_grid),
        "final": grid(fin_grid),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("mode", choices=["golden", "silhouette"])
    ap.add_argument("--wordnet-dir", default=os.path.join(ROOT, "data", "wordnet-3.0"))
    ap.add_argument("--seed-verbs", default=os.path.join(ROOT, "data", "bloom_seeds.txt"))
    ap.add_argument("--manifest")
    ap.add_argument("--verbs")
    ap.add_argument("--impact", type=float, default=30.0)
    ap.add_argument("--sim-threshold", type=float, default=0.65)
    ap.add_argument("--lo-threshold", type=float, default=0.5)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    tax = Taxonomy(args.wordnet_dir)
    clusters = read_seeds(args.seed_verbs)

    if args.mode == "golden":
        with open(args.manifest, encoding="utf-8") as f:
            manifest = json.load(f)
        base = os.path.dirname(os.path.abspath(args.manifest))
        result = {
            "config": {"impact": args.impact, "sim_threshold": args.sim_threshold, "lo_threshold": args.lo_threshold},
            "pairs": {},
        }
        for entry in manifest["pairs"]:
            with open(os.path.join(base, entry["receiving"]), encoding="utf-8") as f:
                receiving = json.load(f)
            with open(os.path.join(base, entry["sending"]), encoding="utf-8") as f:
                sending = json.load(f)
            result["pairs"][entry["id"]] = assess(
                tax, clusters, receiving, sending, args.impact, args.sim_threshold, args.lo_threshold)
    else:
        with open(args.verbs, encoding="utf-8") as f:
            verbs = [line.strip() for line in f if line.strip() and not line.startswith("#")]
        result = {}
        for verb in verbs:
            level, scores = silhouette(tax, clusters, verb)
            result[verb] = {"level": level, "scores": [None if s is None else round6(s) for s in scores]}

    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(result, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
