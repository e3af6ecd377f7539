import math

import numpy as np
import pytest
from sklearn.metrics.pairwise import cosine_similarity as sk_cosine

from budgetdp.allocation import CompositionLedger
from budgetdp.document import tokenize
from budgetdp.embeddings import Embedder
from budgetdp.errors import ConfigError, DataError
from budgetdp.evaluation import (
    RelativeGainInputs,
    avg_sentence_bleu,
    doc_cosine_similarity,
    nn_attack,
    perturbation_stats,
    relative_gain,
    sentence_bleu,
)
from budgetdp.mechanism import (
    FLAG_OOV,
    FLAG_PERTURBED,
    FLAG_STOPWORD,
    FLAG_UNCHANGED,
    PrivatizedDocument,
)


def reference_bleu(ref_text, cand_text):
    """Independent BLEU oracle: explicit n-gram dictionaries and loops,
    add-one smoothing on zero clipped counts, brevity penalty."""
    ref = [t.surface for t in tokenize(ref_text).tokens]
    cand = [t.surface for t in tokenize(cand_text).tokens]
    if not cand:
        return 0.0
    product = 1.0
    for n in range(1, 5):
        ref_counts = {}
        for i in range(len(ref) - n + 1):
            g = tuple(ref[i:i + n])
            ref_counts[g] = ref_counts.get(g, 0) + 1
        cand_counts = {}
        for i in range(len(cand) - n + 1):
            g = tuple(cand[i:i + n])
            cand_counts[g] = cand_counts.get(g, 0) + 1
        matched = 0
        for g, c in cand_counts.items():
            matched += min(c, ref_counts.get(g, 0))
        total = sum(cand_counts.values())
        if matched == 0:
            matched, total = 1, total + 1
        product *= matched / total
    bleu = product ** 0.25
    if len(cand) <= len(ref):
        bleu *= math.exp(1 - len(ref) / len(cand))
    return bleu


# --- cosine similarity ------------------------------------------------------


def test_identical_texts_cosine_exactly_one(plane_embedder):
    assert doc_cosine_similarity("east north", "east north", plane_embedder) == 1.0


def test_orthogonal_texts_cosine_zero(plane_embedder):
    assert doc_cosine_similarity("east", "north", plane_embedder) == pytest.approx(0.0)


def test_cosine_hand_computation(plane_embedder):
    # ("east", "north") pools to (.5, .5); ("east",) pools to (1, 0)
    got = doc_cosine_similarity("east north", "east", plane_embedder)
    assert got == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_cosine_against_sklearn(mini_embedder):
    pairs = [
        ("Alice loved the pasta", "Alice loved the soup"),
        ("the concert in Vienna", "the rain in Oslo"),
    ]
    for a, b in pairs:
        u = mini_embedder.pool(t.surface for t in tokenize(a).tokens)
        v = mini_embedder.pool(t.surface for t in tokenize(b).tokens)
        expected = float(sk_cosine([u], [v])[0, 0])
        assert doc_cosine_similarity(a, b, mini_embedder) == pytest.approx(expected, abs=1e-12)


def test_cosine_no_embeddable_tokens_is_zero(plane_embedder):
    assert doc_cosine_similarity("xqzt", "east", plane_embedder) == 0.0


# --- BLEU ---------------------------------------------------------------------


def test_bleu_identity_is_exactly_one():
    texts = ["the cat sat", "a much longer sentence with many tokens inside it"]
    assert avg_sentence_bleu(texts, texts) == 1.0


def test_bleu_no_overlap_three_tokens():
    # hand evaluation: p1=1/4, p2=1/3, p3=1/2, p4=1/1, BP=1
    expected = (0.25 * (1 / 3) * 0.5 * 1.0) ** 0.25
    got = avg_sentence_bleu(["one two three"], ["four five six"])
    assert got == pytest.approx(expected, abs=1e-12)
    assert got == pytest.approx(0.45180100180492244, abs=1e-9)


def test_bleu_longer_candidate_cross_check():
    got = avg_sentence_bleu(["the cat sat"], ["the cat sat on"])
    # p1=3/4, p2=2/3, p3=1/2, p4 smoothed to 1/2, BP=1 (candidate longer)
    assert got == pytest.approx((0.75 * (2 / 3) * 0.5 * 0.5) ** 0.25, abs=1e-12)
    assert got == pytest.approx(reference_bleu("the cat sat", "the cat sat on"), abs=1e-6)


def test_bleu_matches_reference_on_varied_pairs():
    pairs = [
        ("the cat sat on the mat", "the cat sat on a mat"),
        ("we all enjoy the quiet rain", "we enjoy quiet rain all day"),
        ("alpha beta gamma delta", "alpha beta gamma delta"),
        ("short one", "a very different and much longer candidate text"),
        ("a b c d e f g", "a b x d e y g"),
    ]
    for ref, cand in pairs:
        got = avg_sentence_bleu([ref], [cand])
        assert got == pytest.approx(reference_bleu(ref, cand), abs=1e-9)


def test_bleu_brevity_penalty_applied():
    # candidate shorter than reference: BP = exp(1 - r/c); all precisions are
    # 1 here (the empty 4-gram set smooths to (0+1)/(0+1))
    got = sentence_bleu(["a", "b", "c", "d"], ["a", "b", "c"])
    assert got == pytest.approx(math.exp(1 - 4 / 3), abs=1e-12)


def test_bleu_empty_candidate_scores_zero():
    assert sentence_bleu(["a"], []) == 0.0


def test_bleu_rejects_length_mismatch():
    with pytest.raises(DataError):
        avg_sentence_bleu(["a"], ["a", "b"])


# --- nearest neighbor attack ------------------------------------------------------


def test_nn_identity_corpus_average_rank_one(mini_embedder, mini_corpus):
    texts = {r.id: r.text for r in mini_corpus}
    result = nn_attack(texts, texts, mini_embedder)
    assert result.average_k == 1.0
    assert all(k == 1 for k in result.per_document_rank.values())


def test_nn_three_doc_hand_corpus_matches_brute_force(plane_embedder):
    originals = {"a": "east east", "b": "north", "c": "northeast"}
    privatized = {"a": "north", "b": "east", "c": "northeast south"}

    result = nn_attack(originals, privatized, plane_embedder)

    def pool(text):
        return plane_embedder.pool(t.surface for t in tokenize(text).tokens)

    for doc_id, query_text in originals.items():
        q = pool(query_text)
        sims = {}
        for cand_id, cand_text in privatized.items():
            sims[cand_id] = float(sk_cosine([q], [pool(cand_text)])[0, 0])
        ordered = sorted(sims, key=lambda cid: (-round(sims[cid], 12), cid))
        assert result.per_document_rank[doc_id] == ordered.index(doc_id) + 1


def test_nn_single_document_corpus():
    emb = Embedder({"a": [1.0, 0.0]})
    result = nn_attack({"x": "a"}, {"x": "a"}, emb)
    assert result.average_k == 1.0


def test_nn_tie_broken_by_ascending_id(plane_embedder):
    # both privatized docs embed identically; rank decided by id order
    originals = {"a": "east", "b": "east east"}
    privatized = {"a": "east", "b": "east"}
    result = nn_attack(originals, privatized, plane_embedder)
    assert result.per_document_rank["a"] == 1
    assert result.per_document_rank["b"] == 2


def test_nn_rejects_mismatched_ids(plane_embedder):
    with pytest.raises(DataError):
        nn_attack({"a": "east"}, {"b": "east"}, plane_embedder)


def test_nn_permutation_invariant(mini_embedder, mini_corpus):
    texts = {r.id: r.text for r in mini_corpus}
    flipped = dict(reversed(list(texts.items())))
    a = nn_attack(texts, texts, mini_embedder)
    b = nn_attack(flipped, flipped, mini_embedder)
    assert a.per_document_rank == b.per_document_rank


# --- relative gain -------------------------------------------------------------------


def gain(U_o, U_r, P_o, P_r, MG_u, MG_p):
    return relative_gain(
        RelativeGainInputs(
            utility_baseline=U_o,
            utility_privatized=U_r,
            privacy_baseline=P_o,
            privacy_privatized=P_r,
            majority_utility=MG_u,
            majority_privacy=MG_p,
        )
    )


def test_relative_gain_reference_values():
    assert gain(95.09, 93.53, 95.90, 42.20, 96.65, 29.89) == pytest.approx(1.81, abs=0.01)
    assert gain(95.09, 93.53, 95.90, 17.11, 96.65, 29.89) == pytest.approx(2.19, abs=0.01)
    assert gain(99.49, 94.87, 72.16, 59.61, 95.83, 66.67) == pytest.approx(1.02, abs=0.01)


def test_relative_gain_baseline_self_comparison_is_zero():
    assert gain(95.0, 95.0, 80.0, 80.0, 90.0, 50.0) == pytest.approx(0.0, abs=1e-12)


def test_relative_gain_perfect_privacy_no_utility_loss_is_one():
    assert gain(95.0, 95.0, 80.0, 50.0, 90.0, 50.0) == pytest.approx(1.0, abs=1e-12)


def test_relative_gain_zero_denominator_rejected():
    with pytest.raises(ConfigError):
        gain(95.0, 90.0, 80.0, 70.0, 95.0, 50.0)


# --- perturbation stats ------------------------------------------------------------


def make_priv(doc_id, flags, spends):
    ledger = CompositionLedger(document_id=doc_id, budget=sum(e for e, _ in spends) or 1.0)
    for i, (eps, applied) in enumerate(spends):
        ledger.record(i, eps, applied)
    return PrivatizedDocument(
        document_id=doc_id, replacements={}, ledger=ledger, flags=flags
    )


def test_stats_all_unchanged():
    priv = make_priv("d", {0: FLAG_UNCHANGED, 1: FLAG_UNCHANGED}, [(0.5, True), (0.5, True)])
    assert perturbation_stats([priv]).perturbed_fraction == 0.0


def test_stats_all_changed():
    priv = make_priv("d", {0: FLAG_PERTURBED, 1: FLAG_PERTURBED}, [(0.5, True), (0.5, True)])
    assert perturbation_stats([priv]).perturbed_fraction == 1.0


def test_stats_mixed_counts():
    flags = {i: FLAG_PERTURBED if i < 3 else FLAG_UNCHANGED for i in range(10)}
    spends = [(0.1, True)] * 10
    stats = perturbation_stats([make_priv("d", flags, spends)])
    assert stats.perturbed_fraction == pytest.approx(0.3)
    assert stats.flag_counts[FLAG_PERTURBED] == 3
    assert sum(c for _, _, c in stats.budget_histogram) == 10


def test_stats_flag_counts_include_passthroughs():
    flags = {0: FLAG_STOPWORD, 1: FLAG_OOV, 2: FLAG_PERTURBED}
    stats = perturbation_stats([make_priv("d", flags, [(0.2, False), (0.2, True)])])
    assert stats.flag_counts == {FLAG_STOPWORD: 1, FLAG_OOV: 1, FLAG_PERTURBED: 1}
