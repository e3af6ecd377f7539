"""Privacy/utility metrics over (original, privatized) corpus pairs.

All metrics here are self-contained: document cosine similarity and a
nearest-neighbor attack over pooled static embeddings, smoothed sentence
BLEU, the relative-gain trade-off score, and perturbation bookkeeping.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .document import tokenize
from .embeddings import Embedder, cosine
from .errors import ConfigError, DataError
from .mechanism import FLAG_PERTURBED, PrivatizedDocument

BLEU_MAX_ORDER = 4


@dataclass
class NnAttackResult:
    per_document_rank: dict[str, int]
    average_k: float


@dataclass
class RelativeGainInputs:
    utility_baseline: float  # U_o
    utility_privatized: float  # U_r
    privacy_baseline: float  # P_o
    privacy_privatized: float  # P_r
    majority_utility: float  # MG_u
    majority_privacy: float  # MG_p


@dataclass
class PerturbationStats:
    perturbed_fraction: float
    flag_counts: dict[str, int]
    budget_histogram: list[tuple[float, float, int]]


@dataclass
class EvalReport:
    avg_cosine_similarity: float
    avg_bleu: float
    nn: NnAttackResult
    perturbed_fraction: float
    budget_histogram: list[tuple[float, float, int]]


def _pool_text(text: str, emb: Embedder):
    return emb.embed_text(tokenize(text).tokens)


def doc_cosine_similarity(original: str, privatized: str, emb: Embedder) -> float:
    """Cosine of the two texts' mean-pooled vectors; 0.0 when either text has
    no in-vocabulary tokens."""
    u = _pool_text(original, emb)
    v = _pool_text(privatized, emb)
    if u is None or v is None:
        return 0.0
    return cosine(u, v)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(reference: Sequence[str], candidate: Sequence[str]) -> float:
    """BLEU-4, uniform weights, add-one smoothing on zero clipped counts.

    A candidate too short to have n-grams of some order contributes 1.0 for
    that order, so identical non-empty pairs score exactly 1.0. An empty
    candidate scores 0.0.
    """
    c = len(candidate)
    r = len(reference)
    if c == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, BLEU_MAX_ORDER + 1):
        cand = _ngram_counts(candidate, n)
        ref = _ngram_counts(reference, n)
        matched = sum(min(count, ref[g]) for g, count in cand.items())
        total = sum(cand.values())
        if matched == 0:
            p = (matched + 1) / (total + 1)
        else:
            p = matched / total
        log_sum += math.log(p) / BLEU_MAX_ORDER
    brevity = 1.0 if c > r else math.exp(1.0 - r / c)
    return brevity * math.exp(log_sum)


def avg_sentence_bleu(originals: Sequence[str], privatized: Sequence[str]) -> float:
    """Mean BLEU over aligned (original=reference, privatized=candidate) pairs."""
    if len(originals) != len(privatized):
        raise DataError(
            f"corpus lengths differ: {len(originals)} originals, {len(privatized)} privatized"
        )
    if not originals:
        raise DataError("cannot average BLEU over an empty corpus")
    scores = [
        sentence_bleu(
            [t.surface for t in tokenize(ref).tokens],
            [t.surface for t in tokenize(cand).tokens],
        )
        for ref, cand in zip(originals, privatized)
    ]
    return float(np.mean(scores))


def nn_attack(
    originals: Mapping[str, str], privatized: Mapping[str, str], emb: Embedder
) -> NnAttackResult:
    """Rank each original's privatized counterpart among all privatized docs.

    Candidates are ordered by descending cosine similarity to the original,
    ties broken by ascending document id; k is the 1-based rank of the true
    counterpart. Higher average k means more plausible deniability.
    """
    if set(originals) != set(privatized):
        raise DataError("original and privatized corpora do not share the same ids")
    if not originals:
        raise DataError("nearest-neighbor attack needs a non-empty corpus")

    zero = np.zeros(emb.dim)
    priv_vecs = {}
    for doc_id, text in privatized.items():
        vec = _pool_text(text, emb)
        priv_vecs[doc_id] = zero if vec is None else vec

    ranks: dict[str, int] = {}
    for doc_id, text in originals.items():
        query = _pool_text(text, emb)
        if query is None:
            query = zero
        scored = sorted(
            ((-cosine(query, vec), cand_id) for cand_id, vec in priv_vecs.items()),
        )
        ranks[doc_id] = 1 + [cand_id for _, cand_id in scored].index(doc_id)
    return NnAttackResult(
        per_document_rank=ranks, average_k=float(np.mean(list(ranks.values())))
    )


def relative_gain(x: RelativeGainInputs) -> float:
    """Utility retained minus privacy leaked, both rescaled against the
    majority/random-guess baselines."""
    du = x.utility_baseline - x.majority_utility
    dp = x.privacy_baseline - x.majority_privacy
    if du == 0 or dp == 0:
        raise ConfigError("relative gain denominators must be nonzero")
    return (x.utility_privatized - x.majority_utility) / du - (
        x.privacy_privatized - x.majority_privacy
    ) / dp


def budget_histogram(epsilons: Iterable[float], bins: int = 10) -> list[tuple[float, float, int]]:
    values = np.asarray(list(epsilons), dtype=float)
    if values.size == 0:
        return []
    counts, edges = np.histogram(values, bins=bins)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(len(counts))
    ]


def perturbation_stats(privatized: Sequence[PrivatizedDocument]) -> PerturbationStats:
    """Fraction of budgeted tokens actually changed, flag counts, and the
    distribution of per-token budgets."""
    flag_counts: dict[str, int] = {}
    epsilons: list[float] = []
    budgeted = 0
    perturbed = 0
    for doc in privatized:
        for flag, count in doc.flag_counts().items():
            flag_counts[flag] = flag_counts.get(flag, 0) + count
        for entry in doc.ledger.spends:
            epsilons.append(entry.epsilon)
        budgeted += len(doc.ledger.spends)
        perturbed += sum(1 for f in doc.flags.values() if f == FLAG_PERTURBED)
    return PerturbationStats(
        perturbed_fraction=(perturbed / budgeted) if budgeted else 0.0,
        flag_counts=flag_counts,
        budget_histogram=budget_histogram(epsilons),
    )
