"""Concept-based tag search over community-curated image collections."""

import json

from ._conceptsearch import CorpusError, StoreError, normalize_tag, tokenize_query, write_benchmark
from ._conceptsearch import Engine as _Engine

__all__ = ["Engine", "CorpusError", "StoreError", "normalize_tag", "tokenize_query", "write_benchmark"]


class Engine:
    """Loaded corpus, index and community concepts.

    Results are plain dicts with the same schema as the HTTP /search payload.
    """

    def __init__(self, core):
        self._core = core

    @classmethod
    def from_files(cls, items, communities, strict=False):
        return cls(_Engine.from_files(str(items), str(communities), strict))

    @classmethod
    def open(cls, index_dir):
        return cls(_Engine.open(str(index_dir)))

    def save(self, index_dir):
        self._core.save(str(index_dir))

    def search(self, q, mode="community", k=10, alpha=1.0, lam=0.5, top_concepts=10,
               grouped=False, clusters=5, lsi_rank=50, seed=42, adaptive_alpha=True):
        return json.loads(self._core.search_json(q, mode, k, alpha, lam, top_concepts, grouped,
                                                 clusters, lsi_rank, seed, adaptive_alpha))

    def concepts(self, q, top=5, mode="community"):
        return json.loads(self._core.concepts_json(q, top, mode))

    def stats(self):
        return json.loads(self._core.stats_json())

    @property
    def item_count(self):
        return self._core.item_count
