"""Word-level metric-DP rewriting over one-dimensionally sorted vocabularies.

The vocabulary is embedded, projected onto k random unit directions, and each
projection induces a sorted list. A token is rewritten by picking one list
uniformly, adding two-sided geometric noise z (P(z) proportional to
exp(-eps*|z|)) to its position, and clamping to the list bounds. Clamping is
deterministic post-processing, so the index-distance privacy bound survives
and the exact output distribution stays computable for tests.

Randomness is counter-based: every token draws from a generator seeded by
(run seed, document id, token index), so outputs do not depend on execution
order or worker count.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .allocation import BudgetAllocation, CompositionLedger, ledger_for
from .document import Document
from .errors import ConfigError, DataError

DEFAULT_K_LISTS = 8

FLAG_STOPWORD = "stopword_passthrough"
FLAG_PUNCT = "punct_passthrough"
FLAG_OOV = "oov_passthrough"
FLAG_PERTURBED = "perturbed"
FLAG_UNCHANGED = "unchanged_by_noise"


@dataclass
class ProjectionLists:
    vocabulary: tuple[str, ...]
    vectors: np.ndarray  # |V| x d, row order follows `vocabulary`
    k: int
    seed: int
    directions: np.ndarray  # k x d unit rows
    orders: np.ndarray  # k x |V|: orders[j] lists vocab indices in sorted order
    ranks: np.ndarray  # k x |V|: ranks[j][vocab_index] = position in list j
    _folded: dict[str, int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.vocabulary)

    def __contains__(self, token: str) -> bool:
        return token.casefold() in self._folded

    def vocab_index(self, token: str) -> int | None:
        return self._folded.get(token.casefold())


def argsort_by_projection(vocabulary, projections) -> np.ndarray:
    """Vocabulary indices sorted by projection value, ties broken by token."""
    return np.lexsort((np.asarray(vocabulary, dtype=object), np.asarray(projections)))


def build_projection_lists(vectors: Mapping[str, np.ndarray], k: int, seed: int) -> ProjectionLists:
    """Sort the vocabulary along k seeded random unit directions.

    The result is a pure function of (vectors, k, seed); vocabulary order is
    canonicalized by sorting tokens so insertion order does not matter.
    """
    if len(vectors) < 2:
        raise DataError(f"vocabulary must hold at least 2 tokens, got {len(vectors)}")
    if k < 1:
        raise ConfigError(f"k must be at least 1, got {k}")

    vocabulary = tuple(sorted(vectors))
    matrix = np.asarray([vectors[t] for t in vocabulary], dtype=float)
    if matrix.ndim != 2:
        raise DataError("all vectors must share one dimension")
    dim = matrix.shape[1]

    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((k, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    orders = np.empty((k, len(vocabulary)), dtype=np.int64)
    ranks = np.empty_like(orders)
    for j in range(k):
        order = argsort_by_projection(vocabulary, matrix @ directions[j])
        orders[j] = order
        ranks[j][order] = np.arange(len(vocabulary))

    folded: dict[str, int] = {}
    for idx, token in enumerate(vocabulary):
        folded.setdefault(token.casefold(), idx)

    return ProjectionLists(
        vocabulary=vocabulary,
        vectors=matrix,
        k=k,
        seed=seed,
        directions=directions,
        orders=orders,
        ranks=ranks,
        _folded=folded,
    )


def token_rng(seed: int, document_id: str, token_index: int) -> np.random.Generator:
    """Generator keyed by (seed, document, token); stable across platforms."""
    doc_key = int.from_bytes(
        hashlib.blake2b(document_id.encode("utf-8"), digest_size=8).digest(), "little"
    )
    return np.random.default_rng(np.random.SeedSequence([seed, doc_key, token_index]))


def sample_two_sided_geometric(eps: float, rng: np.random.Generator, size=None):
    """Sample z with P(z) = ((1-a)/(1+a)) * a^|z|, a = exp(-eps).

    Inverse-transform on one uniform draw per sample. With `size` given,
    returns an int64 array; otherwise a single int.
    """
    if eps <= 0:
        raise ConfigError(f"eps must be positive, got {eps}")
    a = math.exp(-eps)
    threshold = a / (1.0 + a)
    if size is None:
        u = max(rng.random(), 1e-300)
        if u < threshold:
            return int(math.ceil(math.log(u * (1.0 + a)) / eps))
        return int(math.ceil(-math.log((1.0 - u) * (1.0 + a)) / eps - 1.0))
    u = np.maximum(rng.random(size), 1e-300)
    neg = np.ceil(np.log(u * (1.0 + a)) / eps)
    pos = np.ceil(-np.log((1.0 - u) * (1.0 + a)) / eps - 1.0)
    return np.where(u < threshold, neg, pos).astype(np.int64)


def exact_output_pmf(index: int, eps: float, list_length: int) -> np.ndarray:
    """Exact distribution over list positions after noise plus clamping."""
    if eps <= 0:
        raise ConfigError(f"eps must be positive, got {eps}")
    if not 0 <= index < list_length:
        raise DataError(f"index {index} out of bounds for list of length {list_length}")
    if list_length == 1:
        return np.ones(1)

    a = math.exp(-eps)
    p0 = (1.0 - a) / (1.0 + a)
    pmf = np.empty(list_length)
    for y in range(list_length):
        if y == 0:
            # Everything at or below the left edge folds into position 0.
            pmf[y] = a ** index / (1.0 + a) if index >= 1 else 1.0 / (1.0 + a)
        elif y == list_length - 1:
            m = list_length - 1 - index
            pmf[y] = a ** m / (1.0 + a) if m >= 1 else 1.0 / (1.0 + a)
        else:
            pmf[y] = p0 * a ** abs(y - index)
    return pmf


@dataclass
class PrivatizedDocument:
    document_id: str
    replacements: dict[int, str]
    ledger: CompositionLedger
    flags: dict[int, str]

    def flag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for f in self.flags.values():
            counts[f] = counts.get(f, 0) + 1
        return counts


def perturb_token(token: str, lists: ProjectionLists, eps_i: float, rng: np.random.Generator) -> str:
    """Rewrite one token; out-of-vocabulary tokens pass through unchanged."""
    if eps_i <= 0:
        raise ConfigError(f"per-token epsilon must be positive, got {eps_i}")
    vocab_idx = lists.vocab_index(token)
    if vocab_idx is None:
        return token
    _, out_idx = _perturb_index(vocab_idx, lists, eps_i, rng)
    return lists.vocabulary[out_idx]


def _perturb_index(vocab_idx: int, lists: ProjectionLists, eps_i: float, rng) -> tuple[int, int]:
    """Returns (input vocab index, output vocab index). Consumes two draws:
    the uniform list choice first, then the noise."""
    j = int(rng.integers(lists.k))
    position = int(lists.ranks[j][vocab_idx])
    z = sample_two_sided_geometric(eps_i, rng)
    landed = min(max(position + z, 0), len(lists.vocabulary) - 1)
    return vocab_idx, int(lists.orders[j][landed])


def rewrite_document(
    doc: Document,
    alloc: BudgetAllocation,
    lists: ProjectionLists,
    seed: int,
) -> PrivatizedDocument:
    """Apply the mechanism to every budgeted token of one document."""
    if alloc.n_tokens != len(doc.tokens) or (
        alloc.document_id and doc.id and alloc.document_id != doc.id
    ):
        raise DataError("allocation does not belong to this document")

    ledger = ledger_for(alloc)
    replacements: dict[int, str] = {}
    flags: dict[int, str] = {}

    for tok in doc.tokens:
        i = tok.index
        eps_i = alloc.per_token.get(i)
        if eps_i is None:
            flags[i] = FLAG_PUNCT if tok.is_punct else FLAG_STOPWORD
            continue
        vocab_idx = lists.vocab_index(tok.surface)
        if vocab_idx is None:
            # Leak: the token is released verbatim without spending budget.
            flags[i] = FLAG_OOV
            ledger.record(i, eps_i, applied=False)
            continue
        rng = token_rng(seed, doc.id, i)
        _, out_idx = _perturb_index(vocab_idx, lists, eps_i, rng)
        ledger.record(i, eps_i, applied=True)
        if out_idx == vocab_idx:
            flags[i] = FLAG_UNCHANGED
        else:
            flags[i] = FLAG_PERTURBED
            replacements[i] = lists.vocabulary[out_idx]

    return PrivatizedDocument(
        document_id=doc.id, replacements=replacements, ledger=ledger, flags=flags
    )
