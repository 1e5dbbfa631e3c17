#!/usr/bin/env python3
"""Regenerate data/lexicon.txt and data/vocabulary.txt.

lexicon.txt    WordNinja's frequency-ordered English word list (MIT license).
vocabulary.txt Single-word WordNet 3.0 lemmas (nouns, verbs, adjectives,
               adverbs) with abbreviation forms removed.

Usage:
  prepare_wordlists.py --wordninja wordninja_words.txt.gz \
      --wordnet-dir wordnet-3.0/ --data-dir data/

An abbreviation form (any candidate in lookup.tsv or acronym in
acronyms.tsv) is dropped from the vocabulary unless it is itself a lookup
key or one of the 10000 most frequent lexicon words.
"""
import argparse
import gzip
import pathlib
import re

ALPHA = re.compile(r"^[a-z]+$")


def read_tsv_values(path):
    keys, values = set(), set()
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        key, _, rhs = line.partition("\t")
        keys.add(key.strip().lower())
        for v in rhs.split("|"):
            v = v.strip().lower()
            if ALPHA.match(v):
                values.add(v)
    return keys, values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wordninja", required=True)
    ap.add_argument("--wordnet-dir", required=True)
    ap.add_argument("--data-dir", required=True)
    ap.add_argument("--common-rank", type=int, default=10000)
    args = ap.parse_args()

    data = pathlib.Path(args.data_dir)
    with gzip.open(args.wordninja, "rt", encoding="utf-8") as f:
        lexicon = f.read().split()
    (data / "lexicon.txt").write_text("\n".join(lexicon) + "\n", encoding="utf-8")
    rank = {w: i for i, w in enumerate(lexicon)}

    lookup_keys, lookup_values = read_tsv_values(data / "lookup.tsv")
    _, acronym_values = read_tsv_values(data / "acronyms.tsv")
    abbreviations = (lookup_values | acronym_values) - lookup_keys
    abbreviations = {a for a in abbreviations if rank.get(a, 10**9) >= args.common_rank}

    words = set()
    for pos in ("noun", "verb", "adj", "adv"):
        path = pathlib.Path(args.wordnet_dir) / f"index.{pos}"
        for line in path.read_text(encoding="utf-8", errors="replace").splitlines():
            if line.startswith("  "):
                continue
            lemma = line.split(" ", 1)[0].lower()
            if ALPHA.match(lemma) and len(lemma) >= 3:
                words.add(lemma)
    removed = sorted(words & abbreviations)
    words -= abbreviations
    (data / "vocabulary.txt").write_text("\n".join(sorted(words)) + "\n", encoding="utf-8")
    print(f"lexicon: {len(lexicon)} words; vocabulary: {len(words)} words "
          f"({len(removed)} abbreviation forms removed)")
    print("removed:", " ".join(removed))


if __name__ == "__main__":
    main()
