"""Semantic find: top-k best-matching word-window spans for a query.

Hits are whole windows, not single tokens, so a result shows usable
context. Ranking reuses the exact (score descending, index ascending)
order the summarizer selects by; with dedupe on (the default), a hit
whose window overlaps an already-accepted one is skipped so the k results
point at k distinct places.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    BiasQuery,
    EmptyQueryError,
    PoolingMode,
    ScoreVector,
    WindowSpec,
    ranked_indices,
    score,
    window_bounds,
)
from .embeddings import EmbeddingStack
from .tokenizer import TokenizedDocument


class UnbiasedQueryNotSearchableError(ValueError):
    """Search needs query text; the "-1" sentinel has nothing to look for."""


@dataclass(frozen=True)
class SearchHit:
    token_index: int  # center token of the window
    byte_start: int
    byte_end: int
    score: float
    rank: int  # 1-based


def hits_from_scores(
    doc: TokenizedDocument,
    scores: ScoreVector,
    k: int,
    dedupe: bool = True,
) -> list[SearchHit]:
    """Rank cached scores into at most k window hits."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(doc.tokens)
    hits: list[SearchHit] = []
    accepted: list[tuple[int, int]] = []
    for idx in ranked_indices(scores.scores):
        lo, hi = window_bounds(idx, n, scores.window)
        start = doc.tokens[lo].byte_start
        end = doc.tokens[hi].byte_end
        if dedupe and any(start < e and s < end for s, e in accepted):
            continue
        accepted.append((start, end))
        hits.append(
            SearchHit(
                token_index=idx,
                byte_start=start,
                byte_end=end,
                score=scores.scores[idx],
                rank=len(hits) + 1,
            )
        )
        if len(hits) == k:
            break
    return hits


def search(
    doc: TokenizedDocument,
    stack: EmbeddingStack,
    window: WindowSpec | int,
    mode: PoolingMode,
    query: BiasQuery,
    k: int,
    dedupe: bool = True,
) -> list[SearchHit]:
    """Top-k window spans most similar to a text query."""
    if query.unbiased:
        raise UnbiasedQueryNotSearchableError("search requires a text query, not \"-1\"")
    if query.text is not None and not query.text.strip():
        raise EmptyQueryError("query has no tokens")
    scores = score(doc, stack, query, window=window, mode=mode)
    return hits_from_scores(doc, scores, k, dedupe=dedupe)
