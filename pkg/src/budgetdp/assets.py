"""Flat-file asset loaders and corpus IO.

Every file format accepted by the package is parsed here and nowhere else.
Loaders either return a fully validated object or raise AssetParseError with
the offending line number; there are no partial silent loads. Corpora and
rewriting outputs are newline-delimited JSON, one record per line.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .embeddings import Embedder
from .errors import AssetParseError, AssetWarning, DataError
from .scoring import IC_CORPORA, POS_TAGS, IcTable


@dataclass
class CorpusRecord:
    id: str
    text: str
    label: str | None = None
    group: str | None = None


def _lines(path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DataError(f"{path} is not valid UTF-8: {exc}") from exc


def load_embeddings(path) -> Embedder:
    """Parse a plain-text vector file: optional `<count> <dim>` header, then
    one `token v1 ... vd` row per line."""
    lines = _lines(path)
    vectors: dict[str, list[float]] = {}
    dim = None
    declared_count = None
    start = 0

    if lines:
        head = lines[0].split()
        if len(head) == 2:
            try:
                declared_count, dim = int(head[0]), int(head[1])
                start = 1
            except ValueError:
                pass

    for line_no, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        fields = line.split()
        token, values = fields[0], fields[1:]
        if not values:
            raise AssetParseError(path, line_no, f"no vector components for {token!r}")
        if token in vectors:
            raise AssetParseError(path, line_no, f"duplicate token {token!r}")
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise AssetParseError(
                path, line_no, f"expected {dim} components, found {len(values)}"
            )
        try:
            vec = [float(v) for v in values]
        except ValueError as exc:
            raise AssetParseError(path, line_no, f"bad float: {exc}") from exc
        if not all(math.isfinite(v) for v in vec):
            raise AssetParseError(path, line_no, f"non-finite component for {token!r}")
        vectors[token] = vec

    if declared_count is not None and declared_count != len(vectors):
        raise AssetParseError(
            path, len(lines), f"header declares {declared_count} rows, found {len(vectors)}"
        )
    if not vectors:
        raise DataError(f"{path}: embedding file holds no vectors")
    return Embedder(vectors)


def load_stopwords(path) -> frozenset[str]:
    """One word per line, lowercase; `#` starts a comment line."""
    words = set()
    for line_no, line in enumerate(_lines(path), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if len(stripped.split()) != 1:
            raise AssetParseError(path, line_no, "stopword entries must be single words")
        words.add(stripped.casefold())
    return frozenset(words)


def load_gazetteer(path) -> tuple[str, ...]:
    """One entity phrase per line; blank lines ignored."""
    phrases = []
    for line in _lines(path):
        stripped = line.strip()
        if stripped:
            phrases.append(stripped)
    return tuple(phrases)


def load_pos_lexicon(path) -> dict[str, str]:
    """TSV of `token<TAB>tag`; tags from the coarse tag set."""
    lexicon: dict[str, str] = {}
    for line_no, line in enumerate(_lines(path), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise AssetParseError(path, line_no, "expected `token<TAB>tag`")
        token, tag = parts[0].strip(), parts[1].strip()
        if tag not in POS_TAGS:
            raise AssetParseError(path, line_no, f"unknown tag {tag!r}")
        key = token.casefold()
        if key in lexicon:
            raise AssetParseError(path, line_no, f"duplicate token {token!r}")
        lexicon[key] = tag
    return lexicon


def load_ic_table(path) -> IcTable:
    """TSV of `lemma<TAB>pos(n|v)<TAB>corpus_id<TAB>ic_value`."""
    table = IcTable()
    for line_no, line in enumerate(_lines(path), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise AssetParseError(path, line_no, "expected 4 tab-separated fields")
        lemma, pos, corpus_id, raw_value = (p.strip() for p in parts)
        try:
            value = float(raw_value)
        except ValueError as exc:
            raise AssetParseError(path, line_no, f"bad IC value: {exc}") from exc
        if corpus_id not in IC_CORPORA:
            warnings.warn(
                f"{path}:{line_no}: unknown corpus id {corpus_id!r} (row kept)",
                AssetWarning,
                stacklevel=2,
            )
        try:
            table.add(lemma, pos, corpus_id, value)
        except DataError as exc:
            raise AssetParseError(path, line_no, str(exc)) from exc
    return table


def read_corpus(path) -> list[CorpusRecord]:
    """Newline-delimited JSON records with fields id/text and optional
    label/group; ids must be unique."""
    records: list[CorpusRecord] = []
    seen: set[str] = set()
    for line_no, line in enumerate(_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AssetParseError(path, line_no, f"bad JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise AssetParseError(path, line_no, "record is not an object")
        if "id" not in obj or "text" not in obj:
            raise AssetParseError(path, line_no, "record needs `id` and `text`")
        doc_id = obj["id"]
        if not isinstance(doc_id, str) or not isinstance(obj["text"], str):
            raise AssetParseError(path, line_no, "`id` and `text` must be strings")
        if doc_id in seen:
            raise AssetParseError(path, line_no, f"duplicate id {doc_id!r}")
        seen.add(doc_id)
        records.append(
            CorpusRecord(
                id=doc_id,
                text=obj["text"],
                label=obj.get("label"),
                group=obj.get("group"),
            )
        )
    return records


def write_corpus(path, records: Iterable[CorpusRecord]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            obj = {"id": rec.id, "text": rec.text}
            if rec.label is not None:
                obj["label"] = rec.label
            if rec.group is not None:
                obj["group"] = rec.group
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")


def write_run_report(path, data: dict) -> None:
    """Deterministic JSON dump (sorted keys) of a run report."""
    Path(path).write_text(
        json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def read_run_report(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read run report {path}: {exc}") from exc


def bundled_asset(name: str) -> Path:
    """Path to one of the miniature assets shipped with the package."""
    return Path(str(resources.files("budgetdp").joinpath("data", name)))


def corpus_texts(records: Sequence[CorpusRecord]) -> dict[str, str]:
    return {rec.id: rec.text for rec in records}
