"""Command-line interface.

Subcommands: score, rewrite, evaluate, compare, validate-assets. All outputs
are deterministic for a fixed (config, assets, corpus): records are sorted by
document id and JSON is dumped with sorted keys.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 composition
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .allocation import rollup_sentences, verify_composition
from .assets import (
    CorpusRecord,
    corpus_texts,
    load_embeddings,
    load_gazetteer,
    load_ic_table,
    load_pos_lexicon,
    load_stopwords,
    read_corpus,
    read_run_report,
    write_corpus,
    write_run_report,
)
from .document import tokenize
from .errors import BudgetDPError, CompositionError, ConfigError, DataError
from .estimators import BudgetRewriter, SensitivityScorer
from .evaluation import (
    EvalReport,
    RelativeGainInputs,
    avg_sentence_bleu,
    doc_cosine_similarity,
    nn_attack,
    perturbation_stats,
    relative_gain,
)
from .mechanism import DEFAULT_K_LISTS
from .scoring import DEFAULT_SCORE_FLOOR, IcTable, METHODS
from .validation import enabled_after_disabling


def _add_asset_args(parser):
    parser.add_argument("--embeddings", help="word vector file (token v1 ... vd)")
    parser.add_argument("--ic-table", help="information-content TSV")
    parser.add_argument("--gazetteer", help="entity phrase list, one per line")
    parser.add_argument("--stopwords", help="stopword list, one per line")
    parser.add_argument("--pos-lexicon", help="token<TAB>tag lexicon TSV")


def _add_run_args(parser):
    parser.add_argument("--epsilon", type=float, default=0.1, help="per-word base budget")
    parser.add_argument(
        "--scale-by-avg-tokens",
        action="store_true",
        help="multiply epsilon by the corpus average budgeted-token count",
    )
    parser.add_argument(
        "--distribution", choices=("naive", "toolkit"), default="toolkit"
    )
    parser.add_argument(
        "--disable-scorer",
        action="append",
        default=[],
        choices=METHODS,
        metavar="METHOD",
        help="drop one scoring method (repeatable)",
    )
    parser.add_argument("--sd-sign", choices=("prose", "verbatim"), default="prose")
    parser.add_argument("--k-lists", type=int, default=DEFAULT_K_LISTS)
    parser.add_argument("--score-floor", type=float, default=DEFAULT_SCORE_FLOOR)
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgetdp",
        description="Sensitivity-weighted privacy budget distribution for "
        "word-level DP text rewriting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="emit per-token sensitivity scores")
    p_score.add_argument("--input", required=True)
    p_score.add_argument("--output", required=True)
    _add_asset_args(p_score)
    _add_run_args(p_score)
    p_score.set_defaults(func=cmd_score)

    p_rewrite = sub.add_parser("rewrite", help="privatize a corpus")
    p_rewrite.add_argument("--input", required=True)
    p_rewrite.add_argument("--output", required=True)
    p_rewrite.add_argument(
        "--report", help="ledger/run report path (default: <output>.report.json)"
    )
    _add_asset_args(p_rewrite)
    _add_run_args(p_rewrite)
    p_rewrite.set_defaults(func=cmd_rewrite)

    p_eval = sub.add_parser("evaluate", help="compare a privatized corpus to its original")
    p_eval.add_argument("--input", required=True, help="original corpus")
    p_eval.add_argument("--privatized", required=True, help="privatized corpus")
    p_eval.add_argument("--output", required=True)
    p_eval.add_argument(
        "--rewrite-report", help="rewrite report to pull budget histograms from"
    )
    _add_asset_args(p_eval)
    _add_run_args(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_cmp = sub.add_parser("compare", help="naive vs toolkit distribution at equal budget")
    p_cmp.add_argument("--input", required=True)
    p_cmp.add_argument("--output", required=True)
    p_cmp.add_argument(
        "--f1-sidecar", help="JSON with externally measured F1 scores for relative gain"
    )
    p_cmp.add_argument(
        "--ablation",
        action="store_true",
        help="also rewrite once per scoring method with that method disabled",
    )
    _add_asset_args(p_cmp)
    _add_run_args(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_val = sub.add_parser("validate-assets", help="load asset files and report problems")
    p_val.add_argument("--input", help="optional corpus to validate as well")
    _add_asset_args(p_val)
    p_val.set_defaults(func=cmd_validate_assets)

    return parser


def _load_assets(args):
    return {
        "embedder": load_embeddings(args.embeddings) if args.embeddings else None,
        "ic_table": load_ic_table(args.ic_table) if args.ic_table else IcTable(),
        "gazetteer": load_gazetteer(args.gazetteer) if args.gazetteer else (),
        "stopwords": load_stopwords(args.stopwords) if args.stopwords else frozenset(),
        "pos_lexicon": load_pos_lexicon(args.pos_lexicon) if args.pos_lexicon else {},
    }


def _require_embeddings(assets):
    if assets["embedder"] is None:
        raise ConfigError("--embeddings is required for this command")
    return assets["embedder"]


def _scorer_from(args, assets, methods) -> SensitivityScorer:
    return SensitivityScorer(
        embedder=_require_embeddings(assets),
        ic_table=assets["ic_table"],
        gazetteer=assets["gazetteer"],
        pos_lexicon=assets["pos_lexicon"],
        stopwords=assets["stopwords"],
        methods=methods,
        sd_sign=args.sd_sign,
        score_floor=args.score_floor,
    )


def _rewriter_from(args, assets, methods, distribution) -> BudgetRewriter:
    return BudgetRewriter(
        epsilon=args.epsilon,
        scale_by_avg_tokens=args.scale_by_avg_tokens,
        distribution=distribution,
        k_lists=args.k_lists,
        seed=args.seed,
        embedder=_require_embeddings(assets),
        ic_table=assets["ic_table"],
        gazetteer=assets["gazetteer"],
        pos_lexicon=assets["pos_lexicon"],
        stopwords=assets["stopwords"],
        methods=methods,
        sd_sign=args.sd_sign,
        score_floor=args.score_floor,
    )


def cmd_score(args) -> int:
    assets = _load_assets(args)
    methods = enabled_after_disabling(args.disable_scorer)
    records = sorted(read_corpus(args.input), key=lambda r: r.id)
    scorer = _scorer_from(args, assets, methods).fit(records)

    with Path(args.output).open("w", encoding="utf-8") as fh:
        for rec, (tagged, vectors, profile) in zip(records, scorer.score_details(records)):
            budgeted = [
                t.index for t in tagged.tokens if not t.is_stopword and not t.is_punct
            ]
            row = {
                "id": rec.id,
                "tokens": [t.surface for t in tagged.tokens],
                "pos_tags": [t.pos_tag for t in tagged.tokens],
                "budgeted_indices": budgeted,
                "no_recipients": not budgeted,
                "scores": {
                    m: [round(float(x), 12) for x in v.normalized]
                    for m, v in vectors.items()
                },
                "aggregate": [round(float(x), 12) for x in profile.scores],
                "degenerate_methods": sorted(m for m, v in vectors.items() if v.degenerate),
            }
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")
    return 0


def _rewrite_corpus(rewriter, records):
    results = rewriter.privatize(records)
    out_records = []
    per_document = {}
    for rec, res in zip(records, results):
        out_records.append(
            CorpusRecord(id=rec.id, text=res.text, label=rec.label, group=rec.group)
        )
        report = verify_composition(res.privatized.ledger)
        if not report.passed:
            raise CompositionError(f"document {rec.id!r}: {report.message}")
        per_document[rec.id] = {
            "budget": res.allocation.total_epsilon,
            "mode": res.allocation.mode,
            "budgeted_tokens": len(res.allocation.per_token),
            "composition_passed": report.passed,
            "residual": report.residual,
            "unapplied": report.unapplied,
            "flags": res.privatized.flag_counts(),
            "sentence_budgets": [
                round(v, 12) for _, v in sorted(rollup_sentences(res.allocation, res.document).items())
            ],
            "spends": [
                {"token_index": e.token_index, "epsilon": e.epsilon, "applied": e.applied}
                for e in res.privatized.ledger.spends
            ],
        }
    stats = perturbation_stats([r.privatized for r in results])
    return out_records, per_document, stats


def _stats_dict(stats):
    return {
        "perturbed_fraction": stats.perturbed_fraction,
        "flag_counts": stats.flag_counts,
        "budget_histogram": [
            {"lo": lo, "hi": hi, "count": count} for lo, hi, count in stats.budget_histogram
        ],
    }


def cmd_rewrite(args) -> int:
    assets = _load_assets(args)
    methods = enabled_after_disabling(args.disable_scorer)
    records = sorted(read_corpus(args.input), key=lambda r: r.id)
    rewriter = _rewriter_from(args, assets, methods, args.distribution).fit(records)
    out_records, per_document, stats = _rewrite_corpus(rewriter, records)

    write_corpus(args.output, out_records)
    report_path = args.report or f"{args.output}.report.json"
    write_run_report(
        report_path,
        {
            "command": "rewrite",
            "config": {
                "epsilon": args.epsilon,
                "scale_by_avg_tokens": args.scale_by_avg_tokens,
                "distribution": args.distribution,
                "enabled_methods": list(methods),
                "sd_sign": args.sd_sign,
                "k_lists": args.k_lists,
                "score_floor": args.score_floor,
                "seed": args.seed,
            },
            "avg_budgeted_tokens": rewriter.avg_budgeted_tokens_,
            "document_budget": rewriter.document_budget_,
            "documents": per_document,
            "stats": _stats_dict(stats),
        },
    )
    return 0


def _text_perturbation(records, priv_by_id, stopwords):
    """Token-diff estimate of the perturbed fraction over budgeted tokens."""
    budgeted = 0
    changed = 0
    mismatched = 0
    for rec in records:
        orig = tokenize(rec.text, stopwords)
        priv = tokenize(priv_by_id[rec.id], stopwords)
        if len(orig.tokens) != len(priv.tokens):
            mismatched += 1
            continue
        for o_tok, p_tok in zip(orig.tokens, priv.tokens):
            if o_tok.is_stopword or o_tok.is_punct:
                continue
            budgeted += 1
            if o_tok.surface != p_tok.surface:
                changed += 1
    fraction = (changed / budgeted) if budgeted else 0.0
    return fraction, mismatched


def cmd_evaluate(args) -> int:
    assets = _load_assets(args)
    emb = _require_embeddings(assets)
    originals = sorted(read_corpus(args.input), key=lambda r: r.id)
    privatized = read_corpus(args.privatized)
    if not originals:
        raise DataError("cannot evaluate an empty corpus")
    orig_texts = corpus_texts(originals)
    priv_texts = corpus_texts(privatized)
    if set(orig_texts) != set(priv_texts):
        raise DataError("original and privatized corpora do not share the same ids")

    ids = [rec.id for rec in originals]
    cosines = [doc_cosine_similarity(orig_texts[i], priv_texts[i], emb) for i in ids]
    fraction, mismatched = _text_perturbation(
        originals, priv_texts, assets["stopwords"]
    )
    histogram = []
    flag_counts = {}
    if args.rewrite_report:
        stats = read_run_report(args.rewrite_report).get("stats", {})
        histogram = [
            (h["lo"], h["hi"], h["count"]) for h in stats.get("budget_histogram", [])
        ]
        flag_counts = stats.get("flag_counts", {})

    result = EvalReport(
        avg_cosine_similarity=float(sum(cosines) / len(cosines)),
        avg_bleu=avg_sentence_bleu(
            [orig_texts[i] for i in ids], [priv_texts[i] for i in ids]
        ),
        nn=nn_attack(orig_texts, priv_texts, emb),
        perturbed_fraction=fraction,
        budget_histogram=histogram,
    )
    write_run_report(
        args.output,
        {
            "command": "evaluate",
            "avg_cosine_similarity": result.avg_cosine_similarity,
            "avg_bleu": result.avg_bleu,
            "nn": {
                "average_k": result.nn.average_k,
                "per_document_rank": result.nn.per_document_rank,
            },
            "perturbed_fraction": result.perturbed_fraction,
            "budget_histogram": [
                {"lo": lo, "hi": hi, "count": count}
                for lo, hi, count in result.budget_histogram
            ],
            "flag_counts": flag_counts,
            "token_count_mismatches": mismatched,
        },
    )
    return 0


def _evaluate_pair(records, out_records, emb, stopwords, stats):
    orig_texts = corpus_texts(records)
    priv_texts = corpus_texts(out_records)
    ids = sorted(orig_texts)
    cosines = [doc_cosine_similarity(orig_texts[i], priv_texts[i], emb) for i in ids]
    nn = nn_attack(orig_texts, priv_texts, emb)
    return {
        "avg_cosine_similarity": float(sum(cosines) / len(cosines)),
        "avg_bleu": avg_sentence_bleu(
            [orig_texts[i] for i in ids], [priv_texts[i] for i in ids]
        ),
        "nn_average_k": nn.average_k,
        "stats": _stats_dict(stats),
    }


def _relative_gain_rows(sidecar_path):
    sidecar = read_run_report(sidecar_path)
    try:
        gains = {}
        for row in sidecar["rows"]:
            gains[row["name"]] = relative_gain(
                RelativeGainInputs(
                    utility_baseline=float(sidecar["utility_baseline"]),
                    utility_privatized=float(row["utility"]),
                    privacy_baseline=float(sidecar["privacy_baseline"]),
                    privacy_privatized=float(row["privacy"]),
                    majority_utility=float(sidecar["majority_utility"]),
                    majority_privacy=float(sidecar["majority_privacy"]),
                )
            )
        return gains
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed F1 sidecar {sidecar_path}: {exc}") from exc


def cmd_compare(args) -> int:
    assets = _load_assets(args)
    emb = _require_embeddings(assets)
    methods = enabled_after_disabling(args.disable_scorer)
    records = sorted(read_corpus(args.input), key=lambda r: r.id)

    arms = {"naive": methods, "toolkit": methods}
    report: dict = {"command": "compare", "arms": {}}
    budgets = {}
    for arm, arm_methods in arms.items():
        rewriter = _rewriter_from(args, assets, arm_methods, arm).fit(records)
        out_records, per_document, stats = _rewrite_corpus(rewriter, records)
        budgets[arm] = rewriter.document_budget_
        report["arms"][arm] = _evaluate_pair(
            records, out_records, emb, assets["stopwords"], stats
        )
    report["document_budget"] = budgets
    report["equal_budgets"] = len(set(budgets.values())) == 1

    if args.ablation:
        report["ablation"] = {}
        for method in methods:
            remaining = tuple(m for m in methods if m != method)
            rewriter = _rewriter_from(args, assets, remaining, "toolkit").fit(records)
            out_records, _, stats = _rewrite_corpus(rewriter, records)
            report["ablation"][f"without_{method}"] = _evaluate_pair(
                records, out_records, emb, assets["stopwords"], stats
            )

    if args.f1_sidecar:
        report["relative_gain"] = _relative_gain_rows(args.f1_sidecar)

    write_run_report(args.output, report)
    return 0


def cmd_validate_assets(args) -> int:
    problems = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        loaders = (
            ("embeddings", args.embeddings, lambda p: len(load_embeddings(p))),
            ("ic-table", args.ic_table, lambda p: len(load_ic_table(p).entries)),
            ("gazetteer", args.gazetteer, lambda p: len(load_gazetteer(p))),
            ("stopwords", args.stopwords, lambda p: len(load_stopwords(p))),
            ("pos-lexicon", args.pos_lexicon, lambda p: len(load_pos_lexicon(p))),
            ("corpus", args.input, lambda p: len(read_corpus(p))),
        )
        checked = 0
        for kind, path, loader in loaders:
            if not path:
                continue
            checked += 1
            try:
                count = loader(path)
                print(f"{kind}: ok ({count} entries)")
            except BudgetDPError as exc:
                problems += 1
                print(f"{kind}: ERROR {exc}")
    for w in caught:
        problems += 1
        print(f"warning: {w.message}")
    if checked == 0:
        raise ConfigError("nothing to validate; pass at least one asset path")
    print(f"{checked} file(s) checked, {problems} problem(s)")
    return 0 if problems == 0 else 3


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CompositionError as exc:
        print(f"composition failure: {exc}", file=sys.stderr)
        return 4
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
