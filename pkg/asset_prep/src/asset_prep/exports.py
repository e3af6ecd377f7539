"""Turn raw local resources into budgetdp's flat asset files.

Sources accepted here:
  - word vectors in the usual text format (optional `<count> <dim>` header,
    rows assumed frequency-ordered, the usual convention for vector files);
  - tagged corpora with `word/TAG` tokens (Penn-style tags), one sentence or
    paragraph per line;
  - entity lists, one phrase per line with an optional tab-separated type.

Every exporter validates what it writes well enough that the budgetdp loaders
accept the result without warnings.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from pathlib import Path

# Fine-grained (Penn-style) tag prefixes folded onto the coarse tag set.
_COARSE_TAGS = (
    ("NN", "NN"),
    ("PRP", "PR"),
    ("WP", "PR"),
    ("VB", "VB"),
    ("CD", "CD"),
    ("JJ", "JJ"),
    ("RB", "RB"),
)

# Mirrors the rewriting package's documented lemma convention: one of
# s/es/ed/ing stripped, first match, stem keeps at least two characters.
_SUFFIXES = ("s", "es", "ed", "ing")


def lemmatize(word: str) -> str:
    folded = word.casefold()
    for suffix in _SUFFIXES:
        if folded.endswith(suffix) and len(folded) - len(suffix) >= 2:
            return folded[: -len(suffix)]
    return folded


def coarse_tag(fine: str) -> str:
    fine = fine.upper()
    for prefix, coarse in _COARSE_TAGS:
        if fine.startswith(prefix):
            return coarse
    return "OTHER"


def _require_source(path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"source file not found: {path}")
    return path


def _read_tagged_corpus(path):
    """Yield (word, fine_tag) pairs from a word/TAG corpus."""
    for line in _require_source(path).read_text(encoding="utf-8").splitlines():
        for chunk in line.split():
            word, sep, tag = chunk.rpartition("/")
            if not sep or not word:
                continue
            yield word, tag


def export_embeddings(source, output, vocab_limit: int) -> int:
    """Copy the first `vocab_limit` usable rows (frequency order) into the
    embedding format; returns the row count written."""
    if vocab_limit < 1:
        raise ValueError(f"vocab_limit must be at least 1, got {vocab_limit}")
    lines = _require_source(source).read_text(encoding="utf-8").splitlines()
    start = 0
    if lines:
        head = lines[0].split()
        if len(head) == 2 and all(f.lstrip("+-").isdigit() for f in head):
            start = 1

    rows: list[tuple[str, list[float]]] = []
    seen: set[str] = set()
    dim = None
    for line in lines[start:]:
        if len(rows) >= vocab_limit:
            break
        fields = line.split()
        if len(fields) < 2:
            continue
        token, values = fields[0], fields[1:]
        if token in seen:
            continue
        try:
            vec = [float(v) for v in values]
        except ValueError:
            continue
        if not all(math.isfinite(v) for v in vec):
            continue
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            continue
        seen.add(token)
        rows.append((token, vec))

    if not rows:
        raise ValueError(f"no usable vector rows in {source}")
    with Path(output).open("w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {dim}\n")
        for token, vec in rows:
            fh.write(token + " " + " ".join(repr(v) for v in vec) + "\n")
    return len(rows)


def export_ic_table(corpora: dict[str, str], output) -> int:
    """Build an information-content table from tagged corpora.

    `corpora` maps a corpus id to a word/TAG file. A lemma's IC in a corpus is
    its inverse relative frequency among all tokens, floored at 1, so common
    lemmas land near 1 and rare ones in the hundreds.
    """
    rows = []
    for corpus_id in sorted(corpora):
        counts: dict[str, Counter] = {"n": Counter(), "v": Counter()}
        total = 0
        for word, fine in _read_tagged_corpus(corpora[corpus_id]):
            total += 1
            coarse = coarse_tag(fine)
            if coarse == "NN":
                counts["n"][lemmatize(word)] += 1
            elif coarse == "VB":
                counts["v"][lemmatize(word)] += 1
        for pos in ("n", "v"):
            for lemma, count in sorted(counts[pos].items()):
                value = max(1, round(total / count))
                rows.append((lemma, pos, corpus_id, value))

    with Path(output).open("w", encoding="utf-8") as fh:
        for lemma, pos, corpus_id, value in rows:
            fh.write(f"{lemma}\t{pos}\t{corpus_id}\t{value}\n")
    return len(rows)


def export_gazetteer(source, output) -> int:
    """Deduplicate an entity list (optional tab-separated type column is
    dropped) into one phrase per line."""
    phrases = []
    seen = set()
    for line in _require_source(source).read_text(encoding="utf-8").splitlines():
        phrase = line.split("\t")[0].strip()
        if phrase and phrase not in seen:
            seen.add(phrase)
            phrases.append(phrase)
    if not phrases:
        raise ValueError(f"no entity phrases in {source}")
    Path(output).write_text("\n".join(phrases) + "\n", encoding="utf-8")
    return len(phrases)


def export_pos_lexicon(source, output) -> int:
    """Majority-tag lexicon from a word/TAG corpus, on the coarse tag set."""
    votes: dict[str, Counter] = defaultdict(Counter)
    for word, fine in _read_tagged_corpus(source):
        votes[word.casefold()][coarse_tag(fine)] += 1
    if not votes:
        raise ValueError(f"no tagged tokens in {source}")
    with Path(output).open("w", encoding="utf-8") as fh:
        for token in sorted(votes):
            # ties broken by tag name for reproducibility
            tag = min(votes[token].items(), key=lambda kv: (-kv[1], kv[0]))[0]
            fh.write(f"{token}\t{tag}\n")
    return len(votes)
