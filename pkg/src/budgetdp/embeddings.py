"""Static word-vector lookup with mean pooling.

Stands in for the neural sentence embedders used elsewhere in the literature:
a text embeds as the mean of its in-vocabulary token vectors. Lookups are
case-folded; when two stored tokens collide after casefolding, the first one
seen wins.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import DataError


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clipped to [-1, 1]. Bitwise-equal inputs return
    exactly 1.0; a zero vector on either side returns 0.0."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.array_equal(u, v):
        return 0.0 if not np.any(u) else 1.0
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


class Embedder:
    """Token -> d-dimensional vector table with case-folded lookup."""

    def __init__(self, vectors: Mapping[str, Iterable[float]]):
        if not vectors:
            raise DataError("embedder needs at least one vector")
        self.vectors: dict[str, np.ndarray] = {}
        self._folded: dict[str, str] = {}
        dim = None
        for token, vec in vectors.items():
            arr = np.asarray(vec, dtype=float)
            if arr.ndim != 1:
                raise DataError(f"vector for {token!r} is not one-dimensional")
            if dim is None:
                dim = arr.shape[0]
            elif arr.shape[0] != dim:
                raise DataError(
                    f"vector for {token!r} has dimension {arr.shape[0]}, expected {dim}"
                )
            if not np.all(np.isfinite(arr)):
                raise DataError(f"vector for {token!r} contains a non-finite value")
            self.vectors[token] = arr
            self._folded.setdefault(token.casefold(), token)
        self.dim = int(dim)
        if not any(np.any(v) for v in self.vectors.values()):
            raise DataError("all vectors are zero")

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token.casefold() in self._folded

    def lookup(self, token: str) -> np.ndarray | None:
        key = self._folded.get(token.casefold())
        return None if key is None else self.vectors[key]

    def pool(self, tokens: Iterable[str]) -> np.ndarray | None:
        """Mean of the in-vocabulary token vectors; None if none are known."""
        found = [v for v in (self.lookup(t) for t in tokens) if v is not None]
        if not found:
            return None
        return np.mean(found, axis=0)

    def embed_text(self, doc_tokens) -> np.ndarray | None:
        return self.pool(t.surface for t in doc_tokens)
