"""Distributing a document's privacy budget over its tokens.

Stopwords and punctuation never receive budget. The remaining tokens either
split the budget evenly (naive mode) or inversely to their aggregate
sensitivity (distributed mode): eps_i = eps * (1/s_i) / sum_j (1/s_j). Either
way the per-token budgets compose back to the document budget, which the
ledger machinery checks after every rewrite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .document import Document
from .errors import CompositionError, ConfigError, DataError
from .scoring import SensitivityProfile

COMPOSITION_RTOL = 1e-9


@dataclass
class BudgetAllocation:
    mode: str  # "naive" | "distributed"
    total_epsilon: float
    per_token: dict[int, float]
    excluded: frozenset[int]
    document_id: str = ""
    n_tokens: int = 0

    @property
    def no_recipients(self) -> bool:
        return not self.per_token


@dataclass
class LedgerEntry:
    token_index: int
    epsilon: float
    applied: bool


@dataclass
class CompositionLedger:
    document_id: str
    budget: float
    spends: list[LedgerEntry] = field(default_factory=list)
    no_recipients: bool = False

    def record(self, token_index: int, epsilon: float, applied: bool) -> None:
        self.spends.append(LedgerEntry(token_index, epsilon, applied))

    @property
    def applied_total(self) -> float:
        return math.fsum(e.epsilon for e in self.spends if e.applied)

    @property
    def unapplied_total(self) -> float:
        return math.fsum(e.epsilon for e in self.spends if not e.applied)

    @property
    def residual(self) -> float:
        return self.budget - self.applied_total


@dataclass
class CompositionReport:
    document_id: str
    passed: bool
    residual: float
    unapplied: float
    message: str


def budgeted_indices(doc: Document) -> list[int]:
    return [t.index for t in doc.tokens if not t.is_stopword and not t.is_punct]


def allocate_uniform(doc: Document, epsilon: float) -> BudgetAllocation:
    """Equal split of the budget over the non-stopword, non-punctuation tokens."""
    if epsilon <= 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    recipients = budgeted_indices(doc)
    share = epsilon / len(recipients) if recipients else 0.0
    return BudgetAllocation(
        mode="naive",
        total_epsilon=epsilon,
        per_token={i: share for i in recipients},
        excluded=frozenset(range(len(doc.tokens))) - frozenset(recipients),
        document_id=doc.id,
        n_tokens=len(doc.tokens),
    )


def allocate_weighted(profile: SensitivityProfile, doc: Document, epsilon: float) -> BudgetAllocation:
    """Budget inversely proportional to aggregate sensitivity, summing to epsilon."""
    if epsilon <= 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    scores = profile.scores
    if len(scores) != len(doc.tokens):
        raise DataError(
            f"profile covers {len(scores)} tokens, document has {len(doc.tokens)}"
        )
    recipients = budgeted_indices(doc)
    per_token: dict[int, float] = {}
    if recipients:
        if any(scores[i] <= 0 for i in recipients):
            raise DataError("sensitivity scores must be strictly positive")
        weights = {i: 1.0 / float(scores[i]) for i in recipients}
        total_weight = math.fsum(weights.values())
        per_token = {i: epsilon * w / total_weight for i, w in weights.items()}
        # Fold the floating-point residual into the largest allocation
        # (lowest index on ties) so the budgets compose exactly.
        residual = epsilon - math.fsum(per_token.values())
        if residual != 0.0:
            absorber = max(per_token, key=lambda i: (per_token[i], -i))
            per_token[absorber] += residual
    return BudgetAllocation(
        mode="distributed",
        total_epsilon=epsilon,
        per_token=per_token,
        excluded=frozenset(range(len(doc.tokens))) - frozenset(recipients),
        document_id=doc.id,
        n_tokens=len(doc.tokens),
    )


def rollup_sentences(alloc: BudgetAllocation, doc: Document) -> dict[int, float]:
    """Per-sentence budgets: the sum of the member tokens' allocations."""
    if alloc.n_tokens != len(doc.tokens) or (
        alloc.document_id and doc.id and alloc.document_id != doc.id
    ):
        raise DataError("allocation does not belong to this document")
    out = {}
    for s, (first, last) in enumerate(doc.sentences):
        out[s] = math.fsum(
            alloc.per_token[i] for i in range(first, last + 1) if i in alloc.per_token
        )
    return out


def scale_budget(per_word_epsilon: float, avg_tokens: float) -> float:
    """Document budget as per-word epsilon times the average token count."""
    if per_word_epsilon <= 0 or avg_tokens <= 0:
        raise ConfigError("per-word epsilon and average token count must be positive")
    return per_word_epsilon * avg_tokens


def ledger_for(alloc: BudgetAllocation) -> CompositionLedger:
    return CompositionLedger(
        document_id=alloc.document_id,
        budget=alloc.total_epsilon,
        no_recipients=alloc.no_recipients,
    )


def verify_composition(ledger: CompositionLedger) -> CompositionReport:
    """Check that every allocated token was accounted for.

    Passes when the recorded spends (applied or explicitly flagged as
    unappliable passthroughs) sum to the document budget within 1e-9 relative
    tolerance, or when the allocation had no recipients at all.
    """
    if not ledger.spends:
        if ledger.no_recipients:
            return CompositionReport(
                ledger.document_id, True, ledger.budget, 0.0, "no recipients"
            )
        return CompositionReport(
            ledger.document_id,
            False,
            ledger.residual,
            0.0,
            "no spends recorded against a non-empty allocation",
        )
    recorded = math.fsum(e.epsilon for e in ledger.spends)
    gap = recorded - ledger.budget
    passed = abs(gap) <= COMPOSITION_RTOL * ledger.budget
    message = "ok" if passed else f"spends total {recorded!r}, budget {ledger.budget!r}"
    return CompositionReport(
        ledger.document_id, passed, ledger.residual, ledger.unapplied_total, message
    )


def require_composition(ledger: CompositionLedger) -> CompositionReport:
    report = verify_composition(ledger)
    if not report.passed:
        raise CompositionError(f"document {ledger.document_id!r}: {report.message}")
    return report
