"""Per-token sensitivity scoring.

Five scoring methods (IC, POS, NER, WI, SD) each produce one raw score per
token. Raw scores are min-max normalized per document and averaged with equal
weights into a single aggregate sensitivity in (0, 1] per token, which the
allocator then inverts into per-token privacy budgets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace as _dc_replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .document import Document, lemmatize
from .embeddings import Embedder, cosine
from .errors import ConfigError, DataError

METHODS = ("IC", "POS", "NER", "WI", "SD")

POS_TAGS = frozenset({"NN", "PR", "VB", "CD", "JJ", "RB", "OTHER"})

# Tag weights for the POS informativeness scorer; anything else scores 0.1.
POS_WEIGHTS = {"NN": 14.0, "PR": 7.0, "VB": 15.0, "CD": 2.0, "JJ": 5.0, "RB": 5.0}
POS_DEFAULT_WEIGHT = 0.1

# The five reference corpora an IC table is normally built from.
IC_CORPORA = ("semcor", "brown", "bnc", "shaks", "treebank")

DEFAULT_SCORE_FLOOR = 1e-3

_NUMERIC_RE = re.compile(r"[+-]?\d[\d,]*(?:\.\d+)?")

_SUFFIX_TAGS = (
    ("ly", "RB"),
    ("ing", "VB"),
    ("ed", "VB"),
    ("ous", "JJ"),
    ("ful", "JJ"),
    ("ive", "JJ"),
)


@dataclass
class ScoreVector:
    """Raw (and, once normalized, [0,1]-scaled) scores for one method."""

    method: str
    raw: np.ndarray
    normalized: np.ndarray | None = None
    degenerate: bool = False


@dataclass
class SensitivityProfile:
    """Aggregate per-token sensitivity, floored away from zero."""

    scores: np.ndarray
    enabled_methods: tuple[str, ...]
    score_floor: float = DEFAULT_SCORE_FLOOR


@dataclass
class IcTable:
    """(lemma, pos) -> per-corpus information-content values, all >= 1."""

    entries: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)
    extra_corpora: tuple[str, ...] = ()

    @property
    def corpus_ids(self) -> tuple[str, ...]:
        return IC_CORPORA + tuple(c for c in self.extra_corpora if c not in IC_CORPORA)

    def add(self, lemma: str, pos: str, corpus_id: str, value: float) -> None:
        if pos not in ("n", "v"):
            raise DataError(f"IC part of speech must be 'n' or 'v', got {pos!r}")
        if value < 1.0:
            raise DataError(f"IC value {value} below 1 for {lemma!r}")
        per_corpus = self.entries.setdefault((lemma, pos), {})
        # Several rows per (lemma, pos, corpus) model multiple senses; keep the max.
        per_corpus[corpus_id] = max(per_corpus.get(corpus_id, 1.0), float(value))
        if corpus_id not in IC_CORPORA and corpus_id not in self.extra_corpora:
            self.extra_corpora = self.extra_corpora + (corpus_id,)

    def mean_ic(self, lemma: str, pos: str) -> float:
        """Mean over all corpora of the lemma's max IC, 1.0 where absent."""
        per_corpus = self.entries.get((lemma, pos), {})
        corpora = self.corpus_ids
        return sum(per_corpus.get(c, 1.0) for c in corpora) / len(corpora)


def _require_tagged(doc: Document) -> None:
    if any(tok.pos_tag is None for tok in doc.tokens):
        raise DataError(f"document {doc.id!r} is not POS-tagged")


def tag_pos(doc: Document, lexicon: Mapping[str, str]) -> Document:
    """Fill every token's pos_tag.

    Order of rules: punctuation -> OTHER, case-insensitive lexicon lookup,
    numeric literal -> CD, suffix heuristics, capitalized mid-sentence -> NN,
    otherwise OTHER.
    """
    bad = {t for t in lexicon.values() if t not in POS_TAGS}
    if bad:
        raise DataError(f"lexicon contains unknown tags: {sorted(bad)}")
    folded_lexicon = {tok.casefold(): tag for tok, tag in lexicon.items()}
    starts = doc.sentence_starts()

    tagged = []
    for tok in doc.tokens:
        tagged.append(_dc_replace(tok, pos_tag=_tag_one(tok, folded_lexicon, starts)))
    return doc.with_tokens(tagged)


def _tag_one(tok, folded_lexicon, sentence_starts) -> str:
    if tok.is_punct:
        return "OTHER"
    surface = tok.surface
    hit = folded_lexicon.get(surface.casefold())
    if hit is not None:
        return hit
    if _NUMERIC_RE.fullmatch(surface):
        return "CD"
    folded = surface.casefold()
    for suffix, tag in _SUFFIX_TAGS:
        if folded.endswith(suffix) and len(folded) > len(suffix):
            return tag
    if surface[:1].isupper() and tok.index not in sentence_starts:
        return "NN"
    return "OTHER"


def score_ic(doc: Document, table: IcTable) -> ScoreVector:
    """Information-content scores: nouns and verbs get their mean-over-corpora
    max IC, everything else scores exactly 1.0."""
    _require_tagged(doc)
    raw = np.ones(len(doc.tokens))
    for i, tok in enumerate(doc.tokens):
        if tok.pos_tag == "NN":
            pos = "n"
        elif tok.pos_tag == "VB":
            pos = "v"
        else:
            continue
        lemma = tok.lemma if tok.lemma is not None else lemmatize(tok.surface)
        raw[i] = table.mean_ic(lemma, pos)
    return ScoreVector(method="IC", raw=raw)


def score_pos(doc: Document) -> ScoreVector:
    """Fixed tag-weight scores."""
    _require_tagged(doc)
    raw = np.array(
        [POS_WEIGHTS.get(tok.pos_tag, POS_DEFAULT_WEIGHT) for tok in doc.tokens],
        dtype=float,
    )
    return ScoreVector(method="POS", raw=raw)


def _gazetteer_index(gazetteer: Iterable[str]) -> dict[str, list[tuple[str, ...]]]:
    by_first: dict[str, list[tuple[str, ...]]] = {}
    for phrase in gazetteer:
        words = tuple(phrase.split())
        if not words:
            continue
        by_first.setdefault(words[0], []).append(words)
    for words_list in by_first.values():
        words_list.sort(key=len, reverse=True)
    return by_first


def score_ner(doc: Document, gazetteer: Iterable[str]) -> ScoreVector:
    """Entity scores: 1.0 inside a (longest-match, case-sensitive) gazetteer
    phrase or for a capitalized non-stopword token mid-sentence, else 0.0."""
    raw = np.zeros(len(doc.tokens))
    by_first = _gazetteer_index(gazetteer)
    surfaces = [tok.surface for tok in doc.tokens]

    i = 0
    n = len(surfaces)
    while i < n:
        matched = 0
        for phrase in by_first.get(surfaces[i], ()):
            L = len(phrase)
            if i + L <= n and tuple(surfaces[i:i + L]) == phrase:
                matched = L
                break
        if matched:
            raw[i:i + matched] = 1.0
            i += matched
        else:
            i += 1

    starts = doc.sentence_starts()
    for i, tok in enumerate(doc.tokens):
        if (
            not tok.is_punct
            and not tok.is_stopword
            and tok.surface[:1].isupper()
            and tok.index not in starts
        ):
            raw[i] = 1.0
    return ScoreVector(method="NER", raw=raw)


def _token_vectors(doc: Document, emb: Embedder) -> list[np.ndarray | None]:
    return [emb.lookup(tok.surface) for tok in doc.tokens]


def score_word_importance(doc: Document, emb: Embedder) -> ScoreVector:
    """One minus the cosine between each token's vector and the mean vector of
    the rest of the document; unknown tokens score 0.0."""
    n = len(doc.tokens)
    vecs = _token_vectors(doc, emb)
    known = [v for v in vecs if v is not None]
    if len(known) < 2:
        return ScoreVector(method="WI", raw=np.zeros(n), degenerate=True)

    total = np.sum(known, axis=0)
    count = len(known)
    raw = np.zeros(n)
    for i, v in enumerate(vecs):
        if v is None:
            continue
        remainder = (total - v) / (count - 1)
        raw[i] = 1.0 - cosine(v, remainder)
    return ScoreVector(method="WI", raw=raw)


def score_sentence_difference(doc: Document, emb: Embedder, sd_sign: str = "prose") -> ScoreVector:
    """Similarity drop when each token is removed from the whole document.

    sd_sign='prose' scores 1 - cosine(full, remainder) so a bigger drop means
    a bigger score; sd_sign='verbatim' returns the cosine itself.
    """
    if sd_sign not in ("prose", "verbatim"):
        raise ConfigError(f"sd_sign must be 'prose' or 'verbatim', got {sd_sign!r}")
    n = len(doc.tokens)
    vecs = _token_vectors(doc, emb)
    known = [v for v in vecs if v is not None]
    if len(known) < 2:
        return ScoreVector(method="SD", raw=np.zeros(n), degenerate=True)

    total = np.sum(known, axis=0)
    count = len(known)
    full = total / count
    raw = np.zeros(n)
    for i, v in enumerate(vecs):
        if v is None:
            sim = 1.0
        else:
            sim = cosine(full, (total - v) / (count - 1))
        raw[i] = sim if sd_sign == "verbatim" else 1.0 - sim
    return ScoreVector(method="SD", raw=raw)


def normalize_scores(v: ScoreVector) -> ScoreVector:
    """Min-max normalize over the document; a constant vector maps to 0.5."""
    raw = np.asarray(v.raw, dtype=float)
    if raw.size == 0:
        return _dc_replace(v, normalized=raw.copy())
    lo = float(raw.min())
    hi = float(raw.max())
    if hi == lo:
        normalized = np.full(raw.shape, 0.5)
    else:
        normalized = (raw - lo) / (hi - lo)
    return _dc_replace(v, normalized=normalized)


def aggregate(
    vectors: Sequence[ScoreVector],
    enabled: Iterable[str] = METHODS,
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> SensitivityProfile:
    """Equal-weight mean of the enabled methods' normalized scores, clamped
    below at score_floor so every aggregate is strictly positive."""
    enabled = tuple(enabled)
    if not enabled:
        raise ConfigError("at least one scoring method must stay enabled")
    unknown = set(enabled) - set(METHODS)
    if unknown:
        raise ConfigError(f"unknown scoring methods: {sorted(unknown)}")
    if not 0.0 < score_floor <= 1.0:
        raise ConfigError(f"score_floor must be in (0, 1], got {score_floor}")

    by_method = {v.method: v for v in vectors}
    missing = [m for m in enabled if m not in by_method]
    if missing:
        raise ConfigError(f"no score vector supplied for: {missing}")

    picked = []
    length = None
    for m in enabled:
        v = by_method[m]
        if v.normalized is None:
            raise DataError(f"score vector {m} is not normalized")
        if length is None:
            length = len(v.normalized)
        elif len(v.normalized) != length:
            raise DataError("score vectors disagree on token count")
        picked.append(np.asarray(v.normalized, dtype=float))

    mean = np.mean(picked, axis=0)
    return SensitivityProfile(
        scores=np.maximum(mean, score_floor),
        enabled_methods=enabled,
        score_floor=score_floor,
    )


def score_document(
    doc: Document,
    *,
    embedder: Embedder,
    ic_table: IcTable,
    gazetteer: Iterable[str] = (),
    pos_lexicon: Mapping[str, str] | None = None,
    enabled: Iterable[str] = METHODS,
    sd_sign: str = "prose",
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> tuple[Document, dict[str, ScoreVector], SensitivityProfile]:
    """Run the full scoring pipeline on one document.

    Returns the tagged document, the normalized score vector for every enabled
    method, and the aggregate profile.
    """
    enabled = tuple(enabled)
    tagged = tag_pos(doc, pos_lexicon or {})
    producers = {
        "IC": lambda: score_ic(tagged, ic_table),
        "POS": lambda: score_pos(tagged),
        "NER": lambda: score_ner(tagged, gazetteer),
        "WI": lambda: score_word_importance(tagged, embedder),
        "SD": lambda: score_sentence_difference(tagged, embedder, sd_sign=sd_sign),
    }
    normalized = {m: normalize_scores(producers[m]()) for m in enabled}
    profile = aggregate(list(normalized.values()), enabled=enabled, score_floor=score_floor)
    return tagged, normalized, profile
