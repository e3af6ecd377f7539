"""Input validation and coercion helpers shared by the estimators and CLI."""

from __future__ import annotations

from typing import Iterable, Sequence

from .assets import CorpusRecord
from .document import Document, tokenize
from .embeddings import Embedder
from .errors import ConfigError
from .scoring import METHODS


def check_positive(name: str, value) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not value > 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def check_methods(methods: Iterable[str]) -> tuple[str, ...]:
    methods = tuple(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ConfigError(f"unknown scoring methods: {unknown}; valid: {list(METHODS)}")
    if not methods:
        raise ConfigError("at least one scoring method must stay enabled")
    return methods


def enabled_after_disabling(disabled: Iterable[str]) -> tuple[str, ...]:
    disabled = set(check_methods(disabled)) if disabled else set()
    enabled = tuple(m for m in METHODS if m not in disabled)
    if not enabled:
        raise ConfigError("cannot disable all five scoring methods")
    return enabled


def check_embedder(embedder) -> Embedder:
    if not isinstance(embedder, Embedder):
        raise ConfigError("an Embedder is required (see load_embeddings)")
    return embedder


def check_choice(name: str, value: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ConfigError(f"{name} must be one of {list(choices)}, got {value!r}")
    return value


def coerce_documents(X, stopwords=frozenset()) -> list[Document]:
    """Accept raw strings, CorpusRecords, or pre-tokenized Documents.

    Bare strings get positional ids (doc-0, doc-1, ...), so rewriting a plain
    list is reproducible for a fixed ordering.
    """
    docs = []
    for i, item in enumerate(X):
        if isinstance(item, Document):
            docs.append(item)
        elif isinstance(item, CorpusRecord):
            docs.append(tokenize(item.text, stopwords, doc_id=item.id))
        elif isinstance(item, str):
            docs.append(tokenize(item, stopwords, doc_id=f"doc-{i}"))
        else:
            raise ConfigError(
                f"cannot interpret corpus item of type {type(item).__name__}"
            )
    return docs
