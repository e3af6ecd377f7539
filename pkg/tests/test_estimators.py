import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from budgetdp.assets import CorpusRecord
from budgetdp.errors import ConfigError, DataError
from budgetdp.estimators import BudgetRewriter, SensitivityScorer


def make_scorer(mini_assets, **kw):
    return SensitivityScorer(
        embedder=mini_assets["embedder"],
        ic_table=mini_assets["ic_table"],
        gazetteer=mini_assets["gazetteer"],
        pos_lexicon=mini_assets["pos_lexicon"],
        stopwords=mini_assets["stopwords"],
        **kw,
    )


def make_rewriter(mini_assets, **kw):
    return BudgetRewriter(
        embedder=mini_assets["embedder"],
        ic_table=mini_assets["ic_table"],
        gazetteer=mini_assets["gazetteer"],
        pos_lexicon=mini_assets["pos_lexicon"],
        stopwords=mini_assets["stopwords"],
        **kw,
    )


def test_scorer_transform_shapes(mini_assets, mini_corpus):
    scorer = make_scorer(mini_assets).fit(mini_corpus)
    profiles = scorer.transform(mini_corpus[:3])
    assert len(profiles) == 3
    for rec, profile in zip(mini_corpus[:3], profiles):
        n_tokens = len(profile.scores)
        assert n_tokens > 0
        assert np.all(profile.scores >= 1e-3)
        assert np.all(profile.scores <= 1.0)


def test_scorer_params_clone_roundtrip(mini_assets):
    scorer = make_scorer(mini_assets, sd_sign="verbatim", score_floor=0.01)
    cloned = clone(scorer)
    assert cloned.get_params()["sd_sign"] == "verbatim"
    assert cloned.get_params()["score_floor"] == 0.01


def test_scorer_rejects_unknown_method(mini_assets):
    with pytest.raises(ConfigError):
        make_scorer(mini_assets, methods=("IC", "XX")).fit([])


def test_scorer_requires_fit_before_transform(mini_assets):
    with pytest.raises(NotFittedError):
        make_scorer(mini_assets).transform(["some text"])


def test_scorer_requires_embedder():
    with pytest.raises(ConfigError):
        SensitivityScorer().fit([])


def test_rewriter_learns_avg_budgeted_tokens(mini_assets, mini_corpus, mini_stopwords):
    rewriter = make_rewriter(mini_assets, epsilon=0.1, scale_by_avg_tokens=True)
    rewriter.fit(mini_corpus)
    from budgetdp.allocation import budgeted_indices
    from budgetdp.document import tokenize

    counts = [
        len(budgeted_indices(tokenize(r.text, mini_stopwords, doc_id=r.id)))
        for r in mini_corpus
    ]
    assert rewriter.avg_budgeted_tokens_ == pytest.approx(float(np.mean(counts)))
    assert rewriter.document_budget_ == pytest.approx(0.1 * np.mean(counts))


def test_rewriter_unscaled_budget_is_epsilon(mini_assets, mini_corpus):
    rewriter = make_rewriter(mini_assets, epsilon=2.5).fit(mini_corpus)
    assert rewriter.document_budget_ == 2.5


def test_rewriter_transform_texts(mini_assets, mini_corpus):
    rewriter = make_rewriter(mini_assets, epsilon=1.0, seed=3).fit(mini_corpus)
    texts = rewriter.transform(mini_corpus)
    assert len(texts) == len(mini_corpus)
    again = rewriter.transform(mini_corpus)
    assert texts == again


def test_rewriter_composition_holds_per_document(mini_assets, mini_corpus):
    rewriter = make_rewriter(
        mini_assets, epsilon=0.1, scale_by_avg_tokens=True, seed=1
    ).fit(mini_corpus)
    for result in rewriter.privatize(mini_corpus):
        total = math.fsum(result.allocation.per_token.values())
        assert abs(total - rewriter.document_budget_) <= 1e-9 * rewriter.document_budget_
        assert result.privatized.ledger.budget == result.allocation.total_epsilon


def test_rewriter_naive_mode_equal_shares(mini_assets, mini_corpus):
    rewriter = make_rewriter(mini_assets, distribution="naive", epsilon=1.0).fit(mini_corpus)
    for result in rewriter.privatize(mini_corpus[:2]):
        shares = set(result.allocation.per_token.values())
        assert len(shares) == 1


def test_rewriter_rejects_empty_fit(mini_assets):
    with pytest.raises(DataError):
        make_rewriter(mini_assets).fit([])


def test_rewriter_rejects_bad_distribution(mini_assets, mini_corpus):
    with pytest.raises(ConfigError):
        make_rewriter(mini_assets, distribution="zigzag").fit(mini_corpus)


def test_rewriter_accepts_plain_strings(mini_assets):
    rewriter = make_rewriter(mini_assets, epsilon=1.0).fit(
        ["Alice loved the pasta", "the rain in Oslo"]
    )
    texts = rewriter.transform(["Alice loved the pasta"])
    assert len(texts) == 1


def test_rewriter_clone_keeps_params(mini_assets):
    rewriter = make_rewriter(mini_assets, epsilon=0.5, k_lists=4, seed=12)
    params = clone(rewriter).get_params()
    assert params["epsilon"] == 0.5
    assert params["k_lists"] == 4
    assert params["seed"] == 12


def test_rewriter_accepts_corpus_records(mini_assets):
    recs = [CorpusRecord(id="z-9", text="Alice loved the pasta")]
    rewriter = make_rewriter(mini_assets, epsilon=1.0).fit(recs)
    results = rewriter.privatize(recs)
    assert results[0].privatized.document_id == "z-9"
