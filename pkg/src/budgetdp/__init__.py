"""Sensitivity-weighted privacy budget distribution for word-level DP text
rewriting: score token sensitivity, split a document budget accordingly,
rewrite with a geometric metric-DP mechanism, and evaluate the result."""

from .allocation import (
    BudgetAllocation,
    CompositionLedger,
    allocate_uniform,
    allocate_weighted,
    rollup_sentences,
    scale_budget,
    verify_composition,
)
from .assets import (
    CorpusRecord,
    bundled_asset,
    load_embeddings,
    load_gazetteer,
    load_ic_table,
    load_pos_lexicon,
    load_stopwords,
    read_corpus,
    write_corpus,
    write_run_report,
)
from .document import Document, Token, detokenize, tokenize
from .embeddings import Embedder, cosine
from .errors import (
    AssetParseError,
    BudgetDPError,
    CompositionError,
    ConfigError,
    DataError,
)
from .estimators import BudgetRewriter, RewriteResult, SensitivityScorer
from .evaluation import (
    EvalReport,
    NnAttackResult,
    RelativeGainInputs,
    avg_sentence_bleu,
    doc_cosine_similarity,
    nn_attack,
    perturbation_stats,
    relative_gain,
    sentence_bleu,
)
from .mechanism import (
    PrivatizedDocument,
    ProjectionLists,
    build_projection_lists,
    exact_output_pmf,
    perturb_token,
    rewrite_document,
    sample_two_sided_geometric,
)
from .scoring import (
    IcTable,
    ScoreVector,
    SensitivityProfile,
    aggregate,
    normalize_scores,
    score_ic,
    score_ner,
    score_pos,
    score_sentence_difference,
    score_word_importance,
    tag_pos,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetAllocation",
    "BudgetRewriter",
    "CompositionLedger",
    "CorpusRecord",
    "Document",
    "Embedder",
    "EvalReport",
    "IcTable",
    "NnAttackResult",
    "PrivatizedDocument",
    "ProjectionLists",
    "RelativeGainInputs",
    "RewriteResult",
    "ScoreVector",
    "SensitivityProfile",
    "SensitivityScorer",
    "Token",
    "aggregate",
    "allocate_uniform",
    "allocate_weighted",
    "avg_sentence_bleu",
    "build_projection_lists",
    "bundled_asset",
    "cosine",
    "detokenize",
    "doc_cosine_similarity",
    "exact_output_pmf",
    "load_embeddings",
    "load_gazetteer",
    "load_ic_table",
    "load_pos_lexicon",
    "load_stopwords",
    "nn_attack",
    "normalize_scores",
    "perturb_token",
    "perturbation_stats",
    "read_corpus",
    "relative_gain",
    "rewrite_document",
    "rollup_sentences",
    "sample_two_sided_geometric",
    "scale_budget",
    "score_ic",
    "score_ner",
    "score_pos",
    "score_sentence_difference",
    "score_word_importance",
    "sentence_bleu",
    "tag_pos",
    "tokenize",
    "verify_composition",
    "write_corpus",
    "write_run_report",
    "AssetParseError",
    "BudgetDPError",
    "CompositionError",
    "ConfigError",
    "DataError",
]
