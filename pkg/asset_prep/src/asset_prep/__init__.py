"""Offline exporters for budgetdp's flat asset formats."""

from .exports import (
    export_embeddings,
    export_gazetteer,
    export_ic_table,
    export_pos_lexicon,
)
from .manifest import ExportManifest, file_sha256

__all__ = [
    "ExportManifest",
    "export_embeddings",
    "export_gazetteer",
    "export_ic_table",
    "export_pos_lexicon",
    "file_sha256",
]
