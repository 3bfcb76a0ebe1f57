"""semsum: query-biased word-level extractive summarization and semantic
document search over static word embeddings.

Typical use: load one or more vector tables into a stack, tokenize a
document, score it against a bias query, pick underline/highlight tiers
by percentage, and render.

    stack = EmbeddingStack(tables=(load_vectors("glove.6B.50d.txt"),))
    doc = tokenize(open("article.txt").read())
    scores = score(doc, stack, BiasQuery.parse("economic decline causes war"))
    card = CardDocument(tag="...", cite=None, document=doc, scores=scores,
                        selection=select(scores, 70, 65))
    print(render_terminal(card))
"""

__version__ = "0.1.0"

from .core import (
    BiasQuery,
    ScoreVector,
    SummarySelection,
    WindowSpec,
    cosine,
    query_vector,
    resummarize,
    score,
    score_document,
    select,
    window_bounds,
)
from .embeddings import (
    EmbeddingStack,
    EmbeddingTable,
    PoolingMode,
    VectorFormat,
    load_vectors,
    lookup,
    pool,
)
from .render import (
    CardDocument,
    SpanRecord,
    SpanReport,
    build_span_report,
    render_card_text,
    render_html,
    render_spans,
    render_terminal,
)
from .search import SearchHit, search
from .tokenizer import Token, TokenizedDocument, lookup_candidates, tokenize

__all__ = [
    "BiasQuery",
    "CardDocument",
    "EmbeddingStack",
    "EmbeddingTable",
    "PoolingMode",
    "ScoreVector",
    "SearchHit",
    "SpanRecord",
    "SpanReport",
    "SummarySelection",
    "Token",
    "TokenizedDocument",
    "VectorFormat",
    "WindowSpec",
    "build_span_report",
    "cosine",
    "lookup",
    "lookup_candidates",
    "load_vectors",
    "pool",
    "query_vector",
    "render_card_text",
    "render_html",
    "render_spans",
    "render_terminal",
    "resummarize",
    "score",
    "score_document",
    "search",
    "select",
    "tokenize",
    "window_bounds",
]
