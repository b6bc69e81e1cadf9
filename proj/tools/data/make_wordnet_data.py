#!/usr/bin/env python3
"""Derive the bundled thesaurus and gloss corpus from WordNet 3.0 data files.

Usage: make_wordnet_data.py WORDNET_DIR CMUDICT_0_7B THESAURUS_OUT CORPUS_OUT

Thesaurus: `word<TAB>syn1,syn2,...` for every single-token WordNet lemma that
is in the pronouncing dictionary. Synonyms come from the lemma's synsets in
sense-frequency order (noun, verb, adjective, adverb), followed by the
similar-to satellites of adjective senses. Multi-word lemmas and words absent
from the pronouncing dictionary are skipped.

Corpus: WordNet glosses (definitions and usage examples) of synsets taken in
a fixed pseudo-random order until the running text covers TARGET_UNIQUE
distinct in-dictionary words.
"""
import random
import re
import sys

POS = [("noun", "n"), ("verb", "v"), ("adj", "a"), ("adv", "r")]
MAX_SYNONYMS = 20
MORPH_RULES = {
    "n": [("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"),
          ("shes", "sh"), ("men", "man"), ("ies", "y")],
    "v": [("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"),
          ("ed", ""), ("ing", "e"), ("ing", "")],
    "a": [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
    "r": [],
}
TARGET_UNIQUE = 5000
WORD_RE = re.compile(r"[A-Za-z]+(?:['\-][A-Za-z]+)*")


def load_vocab(path):
    vocab = set()
    with open(path, encoding="ascii") as f:
        for line in f:
            if line.startswith(";;;") or not line.strip():
                continue
            word = line.split()[0]
            if "(" not in word:
                vocab.add(word.lower())
    return vocab


def parse_data(path):
    synsets = {}
    with open(path, encoding="latin-1") as f:
        for line in f:
            if line.startswith("  "):
                continue
            head, _, gloss = line.partition("|")
            parts = head.split()
            offset = parts[0]
            w_cnt = int(parts[3], 16)
            words = [parts[4 + 2 * i] for i in range(w_cnt)]
            i = 4 + 2 * w_cnt
            p_cnt = int(parts[i])
            ptrs = []
            for k in range(p_cnt):
                sym, off, pos = parts[i + 1 + 4 * k: i + 4 + 4 * k]
                ptrs.append((sym, off, pos))
            words = [re.sub(r"\([a-z]+\)$", "", w).lower() for w in words]
            synsets[offset] = (words, ptrs, gloss.strip())
    return synsets


def parse_index(path):
    senses = {}
    with open(path, encoding="latin-1") as f:
        for line in f:
            if line.startswith("  "):
                continue
            parts = line.split()
            lemma = parts[0]
            p_cnt = int(parts[3])
            synset_cnt = int(parts[2])
            offsets = parts[4 + p_cnt + 2:]
            assert len(offsets) == synset_cnt
            senses[lemma] = offsets
    return senses


def load_exceptions(wn_dir):
    exc = {}
    for name, tag in POS:
        with open(f"{wn_dir}/{name}.exc", encoding="latin-1") as f:
            for line in f:
                parts = line.split()
                if len(parts) >= 2:
                    exc.setdefault(parts[0], []).append((tag, parts[1]))
    return exc


def base_forms(word, index, exc):
    """Candidate (pos, lemma) pairs for an inflected form, WordNet morphy style."""
    out = list(exc.get(word, []))
    for _, tag in POS:
        for suffix, repl in MORPH_RULES[tag]:
            if word.endswith(suffix) and len(word) > len(suffix) + 1:
                out.append((tag, word[: -len(suffix)] + repl))
    return [(t, l) for t, l in out if l in index[t]]


def main(wn_dir, dict_path, thes_out, corpus_out):
    vocab = load_vocab(dict_path)
    data = {tag: parse_data(f"{wn_dir}/data.{name}") for name, tag in POS}
    index = {tag: parse_index(f"{wn_dir}/index.{name}") for name, tag in POS}

    exc = load_exceptions(wn_dir)

    def synonyms_of(word, senses):
        syns = []
        for tag, lemma in senses:
            for off in index[tag].get(lemma, []):
                members = list(data[tag][off][0])
                if tag == "a":
                    for sym, ptr_off, ptr_pos in data["a"][off][1]:
                        if sym == "&" and ptr_pos in ("a", "s"):
                            members += data["a"][ptr_off][0]
                for w in members:
                    if w not in (word, lemma) and "_" not in w and w in vocab and w not in syns:
                        syns.append(w)
        return syns

    lemmas = {l for tag in index for l in index[tag]}
    with open(thes_out, "w", encoding="utf-8", newline="\n") as o:
        for word in sorted(vocab):
            if not WORD_RE.fullmatch(word):
                continue
            if word in lemmas:
                senses = [(tag, word) for _, tag in POS if word in index[tag]]
            else:
                senses = base_forms(word, index, exc)
            syns = synonyms_of(word, senses)
            if syns:
                o.write(word + "\t" + ",".join(syns[:MAX_SYNONYMS]) + "\n")

    glosses = []
    for _, tag in POS:
        for off in sorted(data[tag]):
            glosses.append(data[tag][off][2])
    random.Random(20200501).shuffle(glosses)
    seen = set()
    with open(corpus_out, "w", encoding="utf-8", newline="\n") as o:
        for gloss in glosses:
            if len(seen) >= TARGET_UNIQUE:
                break
            text = gloss.replace('"', "").replace(";", ".").strip()
            if not text.endswith("."):
                text += "."
            o.write(text[0].upper() + text[1:] + "\n")
            for w in WORD_RE.findall(text):
                if w.lower() in vocab:
                    seen.add(w.lower())


if __name__ == "__main__":
    main(*sys.argv[1:5])
