"""Canonical document representation.

A document is tokenized once, up front, into an immutable token list with
character spans back into the raw text. Everything downstream (scoring,
allocation, rewriting) works on token indices, and the rewritten text is
produced by splicing replacement surfaces into the original spans, so all
whitespace and punctuation outside replaced tokens survives byte-for-byte.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import DataError

SENTENCE_TERMINATORS = frozenset({".", "!", "?"})

# One suffix stripped, first match wins, stem must keep >= 2 characters.
_LEMMA_SUFFIXES = ("s", "es", "ed", "ing")

_CHUNK_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str | None
    index: int
    char_span: tuple[int, int]
    pos_tag: str | None
    is_stopword: bool
    is_punct: bool


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    tokens: tuple[Token, ...]
    sentences: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def sentence_starts(self) -> frozenset[int]:
        return frozenset(first for first, _ in self.sentences)

    def with_tokens(self, tokens) -> "Document":
        return replace(self, tokens=tuple(tokens))


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def lemmatize(word: str) -> str:
    """Lowercased base form via a single s/es/ed/ing suffix strip."""
    folded = word.casefold()
    for suffix in _LEMMA_SUFFIXES:
        if folded.endswith(suffix) and len(folded) - len(suffix) >= 2:
            return folded[: -len(suffix)]
    return folded


def _split_chunk(chunk: str, offset: int) -> list[tuple[str, int, int]]:
    """Split one whitespace-free chunk into leading punct chars, a core, and
    trailing punct chars. Internal punctuation (don't, fair-trade) stays put."""
    n = len(chunk)
    lead = 0
    while lead < n and _is_punct_char(chunk[lead]):
        lead += 1
    trail = n
    while trail > lead and _is_punct_char(chunk[trail - 1]):
        trail -= 1
    parts = []
    for i in range(lead):
        parts.append((chunk[i], offset + i, offset + i + 1))
    if trail > lead:
        parts.append((chunk[lead:trail], offset + lead, offset + trail))
    for i in range(trail, n):
        parts.append((chunk[i], offset + i, offset + i + 1))
    return parts


def _split_sentences(text: str, tokens: tuple[Token, ...]) -> tuple[tuple[int, int], ...]:
    # A sentence ends at . ! ? when followed by whitespace plus a capital,
    # or at end of text. Abbreviations are not special-cased.
    sentences: list[tuple[int, int]] = []
    start = 0
    n = len(tokens)
    for i, tok in enumerate(tokens):
        if not (tok.is_punct and tok.surface in SENTENCE_TERMINATORS):
            continue
        if i == n - 1:
            sentences.append((start, i))
            start = i + 1
        else:
            nxt = tokens[i + 1]
            gap = text[tok.char_span[1]:nxt.char_span[0]]
            if gap and nxt.surface[:1].isupper():
                sentences.append((start, i))
                start = i + 1
    if start < n:
        sentences.append((start, n - 1))
    return tuple(sentences)


def tokenize(text: str, stopwords=frozenset(), doc_id: str = "") -> Document:
    """Tokenize text into a Document.

    Whitespace-delimited chunks are split further so that leading/trailing
    punctuation characters become their own single-character tokens. Stopword
    membership is checked case-insensitively against `stopwords`.
    """
    raw: list[tuple[str, int, int]] = []
    for m in _CHUNK_RE.finditer(text):
        raw.extend(_split_chunk(m.group(), m.start()))

    tokens = []
    for i, (surface, start, end) in enumerate(raw):
        punct = all(_is_punct_char(c) for c in surface)
        tokens.append(
            Token(
                surface=surface,
                lemma=None if punct else lemmatize(surface),
                index=i,
                char_span=(start, end),
                pos_tag=None,
                is_stopword=(not punct) and surface.casefold() in stopwords,
                is_punct=punct,
            )
        )
    toks = tuple(tokens)
    return Document(id=doc_id, text=text, tokens=toks, sentences=_split_sentences(text, toks))


def detokenize(doc: Document, replacements: Mapping[int, str]) -> str:
    """Rebuild the document text with the given token replacements spliced in.

    With an empty mapping this returns the original text byte-identically.
    """
    if not replacements:
        return doc.text
    n = len(doc.tokens)
    pieces = []
    prev = 0
    for idx in sorted(replacements):
        if not 0 <= idx < n:
            raise DataError(f"replacement index {idx} out of range for document with {n} tokens")
        start, end = doc.tokens[idx].char_span
        pieces.append(doc.text[prev:start])
        pieces.append(replacements[idx])
        prev = end
    pieces.append(doc.text[prev:])
    return "".join(pieces)
