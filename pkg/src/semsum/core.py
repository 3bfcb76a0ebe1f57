"""Word-window scoring and nested underline/highlight selection.

Every document token is represented by the pooled vector of its
surrounding word window; its score is the cosine similarity between that
vector and the pooled bias-query vector. Windows hold exactly W tokens in
the document interior and clip at the edges, growing from ceil(W/2)+... at
the first token up to full size and shrinking again at the end.

Selection ranks tokens by (score descending, index ascending) — a strict
total order, which is what makes the underline/highlight tiers nest as
the percentages move.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingStack, PoolingMode, lookup, pool_rows
from .tokenizer import TokenizedDocument, tokenize

UNBIASED_SENTINEL = "-1"


class ScoringError(ValueError):
    pass


class EmptyDocumentError(ScoringError):
    pass


class EmptyQueryError(ScoringError):
    pass


class IndexOutOfRangeError(ScoringError, IndexError):
    pass


class LengthMismatchError(ScoringError):
    pass


class PercentOutOfRangeError(ScoringError):
    pass


@dataclass(frozen=True)
class WindowSpec:
    """Number of tokens in a full interior word window."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("window size must be >= 1")


@dataclass(frozen=True)
class BiasQuery:
    """User query steering the summary; the literal string "-1" means unbiased."""

    text: str | None  # None => unbiased (query is the document itself)

    @classmethod
    def parse(cls, raw: str) -> "BiasQuery":
        if raw == UNBIASED_SENTINEL:
            return cls(text=None)
        return cls(text=raw)

    @property
    def unbiased(self) -> bool:
        return self.text is None

    @property
    def raw(self) -> str:
        return UNBIASED_SENTINEL if self.text is None else self.text


@dataclass(frozen=True)
class ScoreVector:
    """Per-token cosine scores plus the configuration they were computed under.

    The fingerprint covers (document bytes, stack identity, window size,
    pooling mode, query), so equal fingerprints mean the cached scores can
    be re-thresholded without any rescoring.
    """

    scores: tuple[float, ...]
    fingerprint: str
    window: int
    pooling: PoolingMode
    query: str
    embedding_names: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class SummarySelection:
    """Nested boolean masks over tokens: the underline and highlight tiers."""

    underlined: tuple[bool, ...]
    highlighted: tuple[bool, ...]
    underline_pct: float
    highlight_pct: float

    def underline_count(self) -> int:
        return sum(self.underlined)

    def highlight_count(self) -> int:
        return sum(self.highlighted)


def window_bounds(i: int, n: int, w: int) -> tuple[int, int]:
    """Inclusive (lo, hi) token bounds of the word window centered at ``i``.

    lo = max(0, i - floor(W/2)) and hi = min(n-1, i + ceil(W/2) - 1), so an
    interior window holds floor(W/2) tokens of left context, the token
    itself, and the rest on the right — exactly W tokens.
    """
    if w < 1:
        raise ValueError("window size must be >= 1")
    if not 0 <= i < n:
        raise IndexOutOfRangeError(f"token index {i} outside document of {n} tokens")
    lo = max(0, i - w // 2)
    hi = min(n - 1, i + (w + 1) // 2 - 1)
    return lo, hi


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity in [-1, 1]; 0 when either vector has zero norm."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise LengthMismatchError(f"vector lengths differ: {av.shape} vs {bv.shape}")
    norm_a = math.sqrt(float(av @ av))
    norm_b = math.sqrt(float(bv @ bv))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    value = float(av @ bv) / (norm_a * norm_b)
    return max(-1.0, min(1.0, value))


def query_vector(
    query: BiasQuery,
    doc: TokenizedDocument,
    stack: EmbeddingStack,
    mode: PoolingMode = PoolingMode.MEAN,
) -> np.ndarray:
    """Pooled vector of the query's tokens.

    An unbiased query runs the identical computation over the document's
    own tokens, so it is bit-for-bit the same as passing the full document
    text as the query.
    """
    if query.unbiased:
        token_texts = [t.text for t in doc.tokens]
        if not token_texts:
            raise EmptyDocumentError("cannot build an unbiased query from an empty document")
    else:
        token_texts = [t.text for t in tokenize(query.text).tokens]
        if not token_texts:
            raise EmptyQueryError("query has no tokens")
    rows = [lookup(stack, text) for text in token_texts]
    return pool_rows(rows, mode)


def settings_fingerprint(
    doc: TokenizedDocument,
    stack: EmbeddingStack,
    window: int,
    mode: PoolingMode,
    query: BiasQuery,
) -> str:
    """Cache key: document bytes + stack identity + window/pooling/query.

    Re-thresholding under an equal fingerprint is free; any other change
    forces rescoring.
    """
    h = hashlib.sha256()
    h.update(doc.source.encode("utf-8"))
    h.update(b"\x00")
    h.update(stack.identity.encode("ascii"))
    h.update(f"|w={window}|p={mode.value}|q=".encode("ascii"))
    h.update(query.raw.encode("utf-8"))
    return h.hexdigest()


def score_document(
    doc: TokenizedDocument,
    stack: EmbeddingStack,
    window: WindowSpec | int,
    mode: PoolingMode,
    qvec: np.ndarray,
    query: BiasQuery | None = None,
) -> ScoreVector:
    """Score every token: cosine(query vector, pooled word-window vector).

    ``query`` only labels the fingerprint; the scores themselves depend on
    ``qvec``. Deterministic for fixed inputs.
    """
    w = window.size if isinstance(window, WindowSpec) else int(window)
    if w < 1:
        raise ValueError("window size must be >= 1")
    n = len(doc.tokens)
    if n == 0:
        raise EmptyDocumentError("cannot score an empty document")
    if qvec.shape != (stack.total_dimension,):
        raise LengthMismatchError(
            f"query vector length {qvec.shape} != stack dimension {stack.total_dimension}"
        )

    # Memoize per token text: documents repeat words heavily.
    vec_cache: dict[str, list[float]] = {}
    rows: list[list[float]] = []
    for token in doc.tokens:
        cached = vec_cache.get(token.text)
        if cached is None:
            cached = lookup(stack, token.text).tolist()
            vec_cache[token.text] = cached
        rows.append(cached)

    scores = []
    for i in range(n):
        lo, hi = window_bounds(i, n, w)
        pooled = pool_rows(rows[lo : hi + 1], mode)
        scores.append(cosine(qvec, pooled))

    fp_query = query if query is not None else BiasQuery(text=None)
    return ScoreVector(
        scores=tuple(scores),
        fingerprint=settings_fingerprint(doc, stack, w, mode, fp_query),
        window=w,
        pooling=mode,
        query=fp_query.raw,
        embedding_names=stack.names,
    )


def score(
    doc: TokenizedDocument,
    stack: EmbeddingStack,
    query: BiasQuery,
    window: WindowSpec | int = 6,
    mode: PoolingMode = PoolingMode.MEAN,
) -> ScoreVector:
    """Convenience wrapper: build the query vector, then score the document."""
    qvec = query_vector(query, doc, stack, mode)
    return score_document(doc, stack, window, mode, qvec, query=query)


def ranked_indices(scores: Sequence[float]) -> list[int]:
    """Token indices by (score descending, index ascending) — the one
    ranking order shared by selection and search."""
    arr = np.asarray(scores, dtype=np.float64)
    order = np.lexsort((np.arange(len(arr)), -arr))
    return [int(i) for i in order]


def _tier_count(pct: float, n: int) -> int:
    if not 0 <= pct <= 100:
        raise PercentOutOfRangeError(f"percentage {pct} outside [0, 100]")
    if n == 0:
        return 0
    # Exact ceil(pct/100 * n): float pct is taken at its exact value so the
    # count can never drift off by one from binary rounding.
    return math.ceil(Fraction(pct) * n / 100)


def select(scores: ScoreVector, underline_pct: float, highlight_pct: float) -> SummarySelection:
    """Mark the top underline_pct% of tokens underlined and the top
    highlight_pct% highlighted, counts rounded up."""
    n = len(scores.scores)
    u_count = _tier_count(underline_pct, n)
    h_count = _tier_count(highlight_pct, n)
    order = ranked_indices(scores.scores)
    underlined = [False] * n
    highlighted = [False] * n
    for i in order[:u_count]:
        underlined[i] = True
    for i in order[:h_count]:
        highlighted[i] = True
    return SummarySelection(
        underlined=tuple(underlined),
        highlighted=tuple(highlighted),
        underline_pct=underline_pct,
        highlight_pct=highlight_pct,
    )


def resummarize(scores: ScoreVector, underline_pct: float, highlight_pct: float) -> SummarySelection:
    """Re-threshold cached scores; identical contract to select(), repeated
    here as a named operation because no embedding or scoring work runs."""
    return select(scores, underline_pct, highlight_pct)
