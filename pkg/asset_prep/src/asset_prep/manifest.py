"""Export manifests: what was read, what was written, row counts, checksums."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class ExportEntry:
    kind: str
    source: str
    output: str
    rows: int
    sha256: str


@dataclass
class ExportManifest:
    entries: list[ExportEntry] = field(default_factory=list)

    def add(self, kind: str, source, output, rows: int) -> ExportEntry:
        entry = ExportEntry(
            kind=kind,
            source=str(source),
            output=str(output),
            rows=rows,
            sha256=file_sha256(output),
        )
        self.entries.append(entry)
        return entry

    def write(self, path) -> None:
        data = {"tool": "asset-prep", "entries": [asdict(e) for e in self.entries]}
        Path(path).write_text(
            json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
