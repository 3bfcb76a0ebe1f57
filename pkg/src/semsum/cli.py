"""Command-line front end.

Interactive mode mirrors the classic workflow: prompt for a bias query
("-1" for unbiased), paste the document and end it with ctrl-d, pick the
underline/highlight percentages, read the summary, optionally re-threshold
the same document (the scores are cached, nothing is recomputed), then
start over or quit.

All prompts and diagnostics go to stderr; stdout carries only the rendered
artifact, so ``semsum ... > card.html`` captures clean output.

Exit codes: 0 success, 1 I/O failure, 2 embedding load failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .core import (
    BiasQuery,
    PercentOutOfRangeError,
    ScoreVector,
    ScoringError,
    resummarize,
    score,
    select,
)
from .embeddings import EmbeddingStack, PoolingMode, VectorFileError, load_vectors
from .render import CardDocument, render_card_text, render_html, render_spans, render_terminal
from .search import SearchHit, hits_from_scores
from .tokenizer import TokenizedDocument, tokenize

EMBEDDINGS_DIR_ENV = "SEMSUM_EMBEDDINGS_DIR"
VECTOR_SUFFIXES = (".vec", ".txt")

EXIT_OK = 0
EXIT_IO = 1
EXIT_EMBEDDINGS = 2


@dataclass
class CliConfig:
    embedding_paths: list[str] = field(default_factory=list)
    window: int = 6
    pooling: str = "mean"
    underline_pct: float = 70.0
    highlight_pct: float = 65.0
    output_format: str = "ansi"
    query: str | None = None
    input_path: str | None = None
    search: bool = False
    top_k: int = 5
    serve_config: str | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semsum",
        description="Query-biased word-level extractive summarizer and semantic search.",
    )
    parser.add_argument(
        "--embeddings",
        action="append",
        default=None,
        metavar="PATH",
        help="word-vector file (GloVe or word2vec text); repeat to stack tables in order. "
        f"Defaults to every {'/'.join(VECTOR_SUFFIXES)} file in ${EMBEDDINGS_DIR_ENV}",
    )
    parser.add_argument("--window", type=int, default=6, help="word-window size (default 6)")
    parser.add_argument(
        "--pooling", choices=["mean", "max", "min"], default="mean", help="vector pooling mode"
    )
    parser.add_argument("--underline", type=float, default=70.0, metavar="PCT",
                        help="percent of tokens to underline (default 70)")
    parser.add_argument("--highlight", type=float, default=65.0, metavar="PCT",
                        help="percent of tokens to highlight (default 65)")
    parser.add_argument(
        "--format", choices=["ansi", "html", "card", "spans"], default="ansi",
        dest="output_format", help="output format (default ansi)",
    )
    parser.add_argument("--query", default=None, help='bias query; "-1" for an unbiased summary')
    parser.add_argument("--input", default=None, metavar="PATH",
                        help="read the document from a file and run once (batch mode)")
    parser.add_argument("--search", action="store_true", help="semantic find instead of a summary")
    parser.add_argument("--top-k", type=int, default=5, metavar="K",
                        help="number of search hits (default 5)")
    parser.add_argument("--serve", default=None, metavar="CONFIG",
                        help="start the HTTP service from a JSON config file")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        embedding_paths=list(args.embeddings) if args.embeddings else [],
        window=args.window,
        pooling=args.pooling,
        underline_pct=args.underline,
        highlight_pct=args.highlight,
        output_format=args.output_format,
        query=args.query,
        input_path=args.input,
        search=args.search,
        top_k=args.top_k,
        serve_config=args.serve,
    )


def _eprint(*parts: str) -> None:
    print(*parts, file=sys.stderr)


def _default_embedding_paths() -> list[str]:
    directory = os.environ.get(EMBEDDINGS_DIR_ENV)
    if not directory or not os.path.isdir(directory):
        return []
    names = sorted(
        name for name in os.listdir(directory) if name.lower().endswith(VECTOR_SUFFIXES)
    )
    return [os.path.join(directory, name) for name in names]


def _load_stack(config: CliConfig) -> EmbeddingStack:
    paths = config.embedding_paths or _default_embedding_paths()
    if not paths:
        raise VectorFileError(
            f"no embedding files: pass --embeddings or set ${EMBEDDINGS_DIR_ENV}"
        )
    tables = []
    for path in paths:
        tables.append(load_vectors(path))
        _eprint(f"loaded {tables[-1].name}: {len(tables[-1])} tokens, dim {tables[-1].dimension}")
    return EmbeddingStack(tables=tuple(tables))


def _render_card(config: CliConfig, card: CardDocument) -> str:
    if config.output_format == "html":
        return render_html(card)
    if config.output_format == "card":
        return render_card_text(card)
    if config.output_format == "spans":
        return render_spans(card)
    return render_terminal(card)


def _render_summary(config: CliConfig, doc: TokenizedDocument, scores: ScoreVector,
                    selection, query: BiasQuery) -> str:
    tag = query.text if not query.unbiased else "(unbiased)"
    card = CardDocument(tag=tag, cite=None, document=doc, scores=scores, selection=selection)
    return _render_card(config, card)


def _render_hits(config: CliConfig, doc: TokenizedDocument, hits: list[SearchHit]) -> str:
    if config.output_format == "spans":
        payload = {
            "hits": [
                {
                    "rank": h.rank,
                    "token_index": h.token_index,
                    "byte_start": h.byte_start,
                    "byte_end": h.byte_end,
                    "score": h.score,
                }
                for h in hits
            ]
        }
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    source_bytes = doc.source.encode("utf-8")
    lines = []
    for h in hits:
        excerpt = source_bytes[h.byte_start : h.byte_end].decode("utf-8")
        lines.append(f"#{h.rank} score={h.score:.6f} bytes {h.byte_start}..{h.byte_end}: {excerpt}")
    return "\n".join(lines) + ("\n" if lines else "")


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
    sys.stdout.flush()


def run_batch(config: CliConfig, stack: EmbeddingStack) -> int:
    try:
        with open(config.input_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        _eprint(f"error: cannot read {config.input_path}: {exc}")
        return EXIT_IO

    doc = tokenize(text)
    if not doc.tokens:
        _eprint("error: document has no tokens")
        return EXIT_IO
    query = BiasQuery.parse(config.query if config.query is not None else "-1")

    if config.search:
        if query.unbiased:
            _eprint('error: search needs a text query ("-1" is not searchable)')
            return EXIT_IO
        scores = score(doc, stack, query, window=config.window,
                       mode=PoolingMode.parse(config.pooling))
        hits = hits_from_scores(doc, scores, config.top_k)
        _emit(_render_hits(config, doc, hits))
        return EXIT_OK

    scores = score(doc, stack, query, window=config.window, mode=PoolingMode.parse(config.pooling))
    selection = select(scores, config.underline_pct, config.highlight_pct)
    _emit(_render_summary(config, doc, scores, selection, query))
    return EXIT_OK


def _prompt(message: str) -> str | None:
    """One line from stdin with the prompt on stderr; None at end-of-file."""
    sys.stderr.write(message)
    sys.stderr.flush()
    line = sys.stdin.readline()
    if line == "":
        sys.stderr.write("\n")
        return None
    return line.rstrip("\n")

def _prompt_pct(message: str, default: float) -> float:
    """Percentage prompt; empty input or end-of-file keeps the default."""
    raw = _prompt(message)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        _eprint(f"not a number: {raw!r}, using {default}")
        return default


def _yes(answer: str | None) -> bool:
    return answer is not None and answer.strip().lower() in ("y", "yes")


def run_interactive(config: CliConfig, stack: EmbeddingStack) -> int:
    mode = PoolingMode.parse(config.pooling)
    while True:
        query_raw = _prompt('Bias query ("-1" for an unbiased summary): ')
        if query_raw is None:
            return EXIT_OK
        query = BiasQuery.parse(query_raw)
        if config.search and query.unbiased:
            _eprint('search needs a text query; "-1" only works for summaries')
            continue

        _eprint("Enter the document, then end input (ctrl-d on its own line):")
        text = sys.stdin.read()
        doc = tokenize(text)
        if not doc.tokens:
            _eprint("document has no tokens, starting over")
            continue

        try:
            scores = score(doc, stack, query, window=config.window, mode=mode)
        except ScoringError as exc:
            _eprint(f"error: {exc}")
            continue

        if config.search:
            hits = hits_from_scores(doc, scores, config.top_k)
            _emit(_render_hits(config, doc, hits))
        else:
            u = _prompt_pct(f"Underline percent [{config.underline_pct}]: ", config.underline_pct)
            h = _prompt_pct(f"Highlight percent [{config.highlight_pct}]: ", config.highlight_pct)
            try:
                _emit(_render_summary(config, doc, scores, select(scores, u, h), query))
            except PercentOutOfRangeError as exc:
                _eprint(f"error: {exc}")

            # Re-threshold loop: reuses the cached scores, nothing is rescored.
            while _yes(_prompt("Re-render with different percentages? [y/N] ")):
                u = _prompt_pct(f"Underline percent [{u}]: ", u)
                h = _prompt_pct(f"Highlight percent [{h}]: ", h)
                try:
                    _emit(_render_summary(config, doc, scores, resummarize(scores, u, h), query))
                except PercentOutOfRangeError as exc:
                    _eprint(f"error: {exc}")

        if not _yes(_prompt("Summarize another document? [y/N] ")):
            return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = _config_from_args(args)

    if config.serve_config is not None:
        from . import service

        try:
            service_config = service.load_config(config.serve_config)
        except OSError as exc:
            _eprint(f"error: cannot read config {config.serve_config}: {exc}")
            return EXIT_IO
        except (ValueError, TypeError) as exc:
            _eprint(f"error: bad config: {exc}")
            return EXIT_IO
        try:
            service.run(service_config)
        except VectorFileError as exc:
            _eprint(f"error: embedding load failed: {exc}")
            return EXIT_EMBEDDINGS
        return EXIT_OK

    try:
        stack = _load_stack(config)
    except (VectorFileError, OSError, UnicodeDecodeError) as exc:
        _eprint(f"error: embedding load failed: {exc}")
        return EXIT_EMBEDDINGS

    try:
        if config.input_path is not None:
            return run_batch(config, stack)
        return run_interactive(config, stack)
    except BrokenPipeError:
        return EXIT_IO
    except OSError as exc:
        _eprint(f"error: I/O failure: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
