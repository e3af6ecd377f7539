"""Scikit-learn style wrappers around the scoring and rewriting pipeline.

Both estimators follow the usual conventions: constructor arguments are
stored verbatim (so get_params/set_params/clone work), fit learns anything
corpus-level and returns self, transform maps a corpus without mutating the
estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .allocation import (
    BudgetAllocation,
    allocate_uniform,
    allocate_weighted,
    budgeted_indices,
    require_composition,
    scale_budget,
)
from .document import Document, detokenize
from .errors import ConfigError, DataError
from .mechanism import (
    DEFAULT_K_LISTS,
    PrivatizedDocument,
    build_projection_lists,
    rewrite_document,
)
from .scoring import (
    DEFAULT_SCORE_FLOOR,
    METHODS,
    IcTable,
    SensitivityProfile,
    score_document,
)
from .validation import (
    check_choice,
    check_embedder,
    check_methods,
    check_positive,
    coerce_documents,
)


@dataclass
class RewriteResult:
    document: Document
    allocation: BudgetAllocation
    privatized: PrivatizedDocument
    text: str


class SensitivityScorer(BaseEstimator, TransformerMixin):
    """Transform texts into per-token aggregate sensitivity profiles.

    Parameters
    ----------
    embedder : Embedder
        Static word vectors used by the WI and SD methods.
    ic_table : IcTable, optional
        Information-content lookup for the IC method; empty table means
        every token scores the 1.0 floor.
    gazetteer : sequence of str, optional
        Entity phrases for the NER method.
    pos_lexicon : mapping, optional
        token -> coarse tag lookup used before the tagging heuristics.
    stopwords : set of str, optional
        Marks stopword tokens (they still receive scores; the allocator
        excludes them later).
    methods : sequence of str
        Which of IC/POS/NER/WI/SD to aggregate.
    sd_sign : 'prose' or 'verbatim'
        Orientation of the sentence-difference score.
    score_floor : float
        Lower clamp applied to the aggregate so no token scores zero.
    """

    def __init__(
        self,
        embedder=None,
        ic_table=None,
        gazetteer=(),
        pos_lexicon=None,
        stopwords=frozenset(),
        methods=METHODS,
        sd_sign="prose",
        score_floor=DEFAULT_SCORE_FLOOR,
    ):
        self.embedder = embedder
        self.ic_table = ic_table
        self.gazetteer = gazetteer
        self.pos_lexicon = pos_lexicon
        self.stopwords = stopwords
        self.methods = methods
        self.sd_sign = sd_sign
        self.score_floor = score_floor

    def fit(self, X, y=None):
        check_embedder(self.embedder)
        check_choice("sd_sign", self.sd_sign, ("prose", "verbatim"))
        self.methods_ = check_methods(self.methods)
        return self

    def score_details(self, X):
        """Full per-document detail: (tagged document, per-method normalized
        score vectors, aggregate profile)."""
        check_is_fitted(self, "methods_")
        table = self.ic_table if self.ic_table is not None else IcTable()
        out = []
        for doc in coerce_documents(X, self.stopwords):
            out.append(
                score_document(
                    doc,
                    embedder=self.embedder,
                    ic_table=table,
                    gazetteer=self.gazetteer,
                    pos_lexicon=self.pos_lexicon,
                    enabled=self.methods_,
                    sd_sign=self.sd_sign,
                    score_floor=self.score_floor,
                )
            )
        return out

    def transform(self, X) -> list[SensitivityProfile]:
        return [profile for _, _, profile in self.score_details(X)]


class BudgetRewriter(BaseEstimator, TransformerMixin):
    """Privatize texts under a fixed per-document budget.

    fit() learns the corpus average budgeted-token count (used when
    scale_by_avg_tokens is on) and builds the vocabulary projection lists;
    transform() rewrites each document under exact budget composition.

    Parameters
    ----------
    epsilon : float
        Per-word base budget; becomes the document budget directly unless
        scale_by_avg_tokens is set.
    scale_by_avg_tokens : bool
        Multiply epsilon by the fit corpus's average budgeted-token count.
    distribution : 'naive' or 'toolkit'
        Equal split versus sensitivity-weighted allocation.
    k_lists : int
        Number of sorted projection lists.
    seed : int
        Root seed; per-token randomness derives from (seed, doc id, index).
    """

    def __init__(
        self,
        epsilon=0.1,
        scale_by_avg_tokens=False,
        distribution="toolkit",
        k_lists=DEFAULT_K_LISTS,
        seed=0,
        embedder=None,
        ic_table=None,
        gazetteer=(),
        pos_lexicon=None,
        stopwords=frozenset(),
        methods=METHODS,
        sd_sign="prose",
        score_floor=DEFAULT_SCORE_FLOOR,
    ):
        self.epsilon = epsilon
        self.scale_by_avg_tokens = scale_by_avg_tokens
        self.distribution = distribution
        self.k_lists = k_lists
        self.seed = seed
        self.embedder = embedder
        self.ic_table = ic_table
        self.gazetteer = gazetteer
        self.pos_lexicon = pos_lexicon
        self.stopwords = stopwords
        self.methods = methods
        self.sd_sign = sd_sign
        self.score_floor = score_floor

    def fit(self, X, y=None):
        check_positive("epsilon", self.epsilon)
        check_choice("distribution", self.distribution, ("naive", "toolkit"))
        check_embedder(self.embedder)
        if int(self.seed) < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")

        docs = coerce_documents(X, self.stopwords)
        if not docs:
            raise DataError("cannot fit on an empty corpus")
        counts = [len(budgeted_indices(d)) for d in docs]
        self.avg_budgeted_tokens_ = float(np.mean(counts))
        if self.scale_by_avg_tokens:
            if self.avg_budgeted_tokens_ <= 0:
                raise DataError("corpus has no budgeted tokens to scale the budget by")
            self.document_budget_ = scale_budget(
                float(self.epsilon), self.avg_budgeted_tokens_
            )
        else:
            self.document_budget_ = float(self.epsilon)

        self.lists_ = build_projection_lists(
            self.embedder.vectors, int(self.k_lists), int(self.seed)
        )
        self.scorer_ = None
        if self.distribution == "toolkit":
            self.scorer_ = SensitivityScorer(
                embedder=self.embedder,
                ic_table=self.ic_table,
                gazetteer=self.gazetteer,
                pos_lexicon=self.pos_lexicon,
                stopwords=self.stopwords,
                methods=self.methods,
                sd_sign=self.sd_sign,
                score_floor=self.score_floor,
            ).fit(X)
        return self

    def allocate(self, doc: Document) -> BudgetAllocation:
        check_is_fitted(self, "document_budget_")
        if self.distribution == "naive":
            return allocate_uniform(doc, self.document_budget_)
        (profile,) = self.scorer_.transform([doc])
        return allocate_weighted(profile, doc, self.document_budget_)

    def privatize(self, X) -> list[RewriteResult]:
        """Rewrite a corpus, returning per-document allocations, ledgers and
        rewritten text; every ledger is verified before returning."""
        check_is_fitted(self, "document_budget_")
        results = []
        for doc in coerce_documents(X, self.stopwords):
            alloc = self.allocate(doc)
            privatized = rewrite_document(doc, alloc, self.lists_, int(self.seed))
            require_composition(privatized.ledger)
            results.append(
                RewriteResult(
                    document=doc,
                    allocation=alloc,
                    privatized=privatized,
                    text=detokenize(doc, privatized.replacements),
                )
            )
        return results

    def transform(self, X) -> list[str]:
        return [result.text for result in self.privatize(X)]
