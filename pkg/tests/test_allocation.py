import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from budgetdp.allocation import (
    CompositionLedger,
    allocate_uniform,
    allocate_weighted,
    budgeted_indices,
    ledger_for,
    rollup_sentences,
    scale_budget,
    verify_composition,
)
from budgetdp.document import tokenize
from budgetdp.errors import ConfigError, DataError
from budgetdp.scoring import SensitivityProfile

STOPS = frozenset({"the", "a", "and", "of", "it", "we"})


def profile_for(doc, scores):
    return SensitivityProfile(scores=np.asarray(scores, dtype=float), enabled_methods=("IC",))


def test_uniform_equal_split():
    doc = tokenize("alpha beta gamma delta")
    alloc = allocate_uniform(doc, 18.11)
    assert set(alloc.per_token) == {0, 1, 2, 3}
    for eps in alloc.per_token.values():
        assert eps == pytest.approx(18.11 / 4, rel=1e-15)
    assert len(set(alloc.per_token.values())) == 1
    assert alloc.mode == "naive"


def test_uniform_singleton():
    doc = tokenize("the word", stopwords=STOPS)
    alloc = allocate_uniform(doc, 2.0)
    assert alloc.per_token == {1: 2.0}


def test_uniform_no_recipients():
    doc = tokenize("the a and of it", stopwords=STOPS)
    alloc = allocate_uniform(doc, 1.0)
    assert alloc.no_recipients
    assert alloc.per_token == {}
    assert alloc.excluded == frozenset(range(5))


def test_uniform_rejects_nonpositive_epsilon():
    doc = tokenize("word")
    for bad in (0.0, -1.0):
        with pytest.raises(ConfigError):
            allocate_uniform(doc, bad)


def test_weighted_symmetry():
    doc = tokenize("one two")
    alloc = allocate_weighted(profile_for(doc, [0.5, 0.5]), doc, 3.0)
    assert alloc.per_token[0] == pytest.approx(1.5, rel=1e-12)
    assert alloc.per_token[1] == pytest.approx(1.5, rel=1e-12)
    assert alloc.mode == "distributed"


def test_weighted_closed_form():
    doc = tokenize("one two")
    alloc = allocate_weighted(profile_for(doc, [0.25, 0.5]), doc, 3.0)
    # weights 4 and 2 -> shares 2/3 and 1/3 of epsilon
    assert alloc.per_token[0] == pytest.approx(2.0, rel=1e-12)
    assert alloc.per_token[1] == pytest.approx(1.0, rel=1e-12)


def test_weighted_floored_token_gets_nearly_everything():
    doc = tokenize("one two")
    alloc = allocate_weighted(profile_for(doc, [0.001, 1.0]), doc, 1.0)
    assert alloc.per_token[0] == pytest.approx(1000.0 / 1001.0, rel=1e-12)
    assert alloc.per_token[1] == pytest.approx(1.0 / 1001.0, rel=1e-12)
    # the most sensitive token receives the smallest budget
    assert alloc.per_token[1] < alloc.per_token[0]


def test_weighted_skips_stopwords_and_punctuation():
    doc = tokenize("we love pasta !", stopwords=STOPS)
    alloc = allocate_weighted(profile_for(doc, [0.9, 0.5, 0.25, 0.9]), doc, 3.0)
    assert set(alloc.per_token) == {1, 2}
    assert alloc.per_token[2] == pytest.approx(2.0, rel=1e-12)
    assert alloc.per_token[1] == pytest.approx(1.0, rel=1e-12)
    assert alloc.excluded == frozenset({0, 3})


def test_weighted_rejects_nonpositive_scores():
    doc = tokenize("one two")
    with pytest.raises(DataError):
        allocate_weighted(profile_for(doc, [0.0, 0.5]), doc, 1.0)


def test_weighted_rejects_profile_length_mismatch():
    doc = tokenize("one two three")
    with pytest.raises(DataError):
        allocate_weighted(profile_for(doc, [0.5, 0.5]), doc, 1.0)


def test_weighted_composition_exact_to_1e12():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 60))
        words = " ".join(f"w{i}" for i in range(n))
        doc = tokenize(words)
        scores = rng.uniform(1e-3, 1.0, size=n)
        eps = float(rng.uniform(0.01, 50))
        alloc = allocate_weighted(profile_for(doc, scores), doc, eps)
        assert abs(math.fsum(alloc.per_token.values()) - eps) <= 1e-12 * eps


def test_monotonicity_and_equal_scores():
    doc = tokenize("w0 w1 w2 w3")
    alloc = allocate_weighted(profile_for(doc, [0.9, 0.1, 0.5, 0.1]), doc, 2.0)
    assert alloc.per_token[0] < alloc.per_token[2] < alloc.per_token[1]
    assert alloc.per_token[1] == pytest.approx(alloc.per_token[3], rel=1e-12)


def test_scale_equivariance():
    doc = tokenize("w0 w1 w2")
    profile = profile_for(doc, [0.2, 0.7, 0.4])
    base = allocate_weighted(profile, doc, 1.3)
    scaled = allocate_weighted(profile, doc, 13.0)
    for i in base.per_token:
        assert scaled.per_token[i] == pytest.approx(10 * base.per_token[i], rel=1e-12)


def test_equal_scores_match_uniform_to_1e12():
    doc = tokenize("w0 w1 w2 w3 w4")
    profile = profile_for(doc, [0.37] * 5)
    weighted = allocate_weighted(profile, doc, 4.2)
    uniform = allocate_uniform(doc, 4.2)
    for i in uniform.per_token:
        assert abs(weighted.per_token[i] - uniform.per_token[i]) <= 1e-12


@settings(max_examples=150)
@given(
    st.lists(st.floats(1e-3, 1.0), min_size=1, max_size=40),
    st.floats(1e-3, 1e3),
)
def test_composition_property(scores, eps):
    doc = tokenize(" ".join(f"w{i}" for i in range(len(scores))))
    for alloc in (
        allocate_uniform(doc, eps),
        allocate_weighted(profile_for(doc, scores), doc, eps),
    ):
        total = math.fsum(alloc.per_token.values())
        assert abs(total - eps) <= 1e-9 * eps


def test_rollup_single_sentence_equals_budget():
    doc = tokenize("alpha beta gamma.")
    alloc = allocate_uniform(doc, 5.0)
    rolled = rollup_sentences(alloc, doc)
    assert rolled == {0: pytest.approx(5.0, rel=1e-12)}


def test_rollup_sums_per_sentence():
    doc = tokenize("alpha beta. Gamma!")
    alloc = allocate_uniform(doc, 6.0)
    rolled = rollup_sentences(alloc, doc)
    assert rolled[0] == pytest.approx(4.0, rel=1e-12)
    assert rolled[1] == pytest.approx(2.0, rel=1e-12)
    assert math.fsum(rolled.values()) == pytest.approx(6.0, rel=1e-9)


def test_rollup_stopword_sentence_is_zero():
    doc = tokenize("pasta rocks. The and of it.", stopwords=STOPS)
    alloc = allocate_uniform(doc, 2.0)
    rolled = rollup_sentences(alloc, doc)
    assert rolled[1] == 0.0


def test_rollup_rejects_foreign_allocation():
    doc = tokenize("a b c")
    other = tokenize("a b")
    alloc = allocate_uniform(doc, 1.0)
    with pytest.raises(DataError):
        rollup_sentences(alloc, other)


def test_scale_budget_reference_values():
    assert scale_budget(0.1, 181.06) == pytest.approx(18.106)
    assert scale_budget(0.5, 51.23) == pytest.approx(25.615)
    assert scale_budget(1.0, 53.94) == pytest.approx(53.94)


def test_scale_budget_rejects_nonpositive():
    with pytest.raises(ConfigError):
        scale_budget(0.0, 10.0)
    with pytest.raises(ConfigError):
        scale_budget(0.1, -1.0)


def make_ledger(eps, spends, no_recipients=False):
    ledger = CompositionLedger(document_id="d", budget=eps, no_recipients=no_recipients)
    for idx, (amount, applied) in enumerate(spends):
        ledger.record(idx, amount, applied)
    return ledger


def test_verify_exact_spends_pass():
    ledger = make_ledger(3.0, [(1.0, True), (2.0, True)])
    report = verify_composition(ledger)
    assert report.passed
    assert report.residual == 0.0


def test_verify_missing_spend_fails_with_residual():
    ledger = make_ledger(3.0, [(1.0, True)])
    report = verify_composition(ledger)
    assert not report.passed
    assert report.residual == pytest.approx(2.0)


def test_verify_overspend_beyond_tolerance_fails():
    eps = 1.0
    ledger = make_ledger(eps, [(eps + 1e-6 * eps, True)])
    assert not verify_composition(ledger).passed


def test_verify_empty_allocation_passes():
    ledger = make_ledger(2.5, [], no_recipients=True)
    report = verify_composition(ledger)
    assert report.passed
    assert report.residual == pytest.approx(2.5)


def test_verify_unapplied_oov_spend_still_accounted():
    ledger = make_ledger(3.0, [(1.0, True), (2.0, False)])
    report = verify_composition(ledger)
    assert report.passed
    assert report.unapplied == pytest.approx(2.0)
    assert report.residual == pytest.approx(2.0)


def test_ledger_for_allocation():
    doc = tokenize("alpha beta")
    alloc = allocate_uniform(doc, 2.0)
    ledger = ledger_for(alloc)
    assert ledger.budget == 2.0
    assert not ledger.no_recipients
    assert budgeted_indices(doc) == [0, 1]
