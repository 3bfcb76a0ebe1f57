"""Render a scored, selected document: terminal escapes, HTML, plain-text
card, or a machine-readable span report.

All renderers are pure functions of the card. The terminal, HTML, and
span outputs are lossless over the body text (a strip/extract pass
recovers the original bytes); the plain-text card uses unescaped ``_`` and
``*`` markers and is advisory only. A token in both tiers renders as
highlight everywhere.
"""

from __future__ import annotations

import html
import io
import json
import re
from dataclasses import dataclass
from html.parser import HTMLParser

from .core import ScoreVector, SummarySelection
from .tokenizer import TokenizedDocument

ESC = "\x1b"
SGR_UNDERLINE_ON = ESC + "[4m"
SGR_UNDERLINE_OFF = ESC + "[24m"
SGR_HIGHLIGHT_ON = ESC + "[43m"  # yellow background, matching the card style
SGR_HIGHLIGHT_OFF = ESC + "[49m"

_SGR_RE = re.compile(r"\x1b\[[0-9;]*m")

TIER_UNDERLINE = "underline"
TIER_HIGHLIGHT = "highlight"

_PLAIN, _UNDER, _HILITE = 0, 1, 2


@dataclass(frozen=True)
class RenderSettings:
    """Knobs the output was produced under, echoed into machine formats."""

    window: int
    pooling: str
    underline_pct: float
    highlight_pct: float
    embedding_names: tuple[str, ...]

    @classmethod
    def from_scores(cls, scores: ScoreVector, selection: SummarySelection) -> "RenderSettings":
        return cls(
            window=scores.window,
            pooling=scores.pooling.value,
            underline_pct=selection.underline_pct,
            highlight_pct=selection.highlight_pct,
            embedding_names=scores.embedding_names,
        )

    def as_dict(self) -> dict:
        return {
            "window": self.window,
            "pooling": self.pooling,
            "underline_pct": self.underline_pct,
            "highlight_pct": self.highlight_pct,
            "embeddings": list(self.embedding_names),
        }


@dataclass(frozen=True)
class SpanRecord:
    tier: str
    byte_start: int
    byte_end: int
    token_index: int
    score: float

    def as_dict(self) -> dict:
        return {
            "tier": self.tier,
            "byte_start": self.byte_start,
            "byte_end": self.byte_end,
            "token_index": self.token_index,
            "score": self.score,
        }


@dataclass(frozen=True)
class SpanReport:
    spans: tuple[SpanRecord, ...]
    settings: RenderSettings

    def as_dict(self) -> dict:
        return {
            "settings": self.settings.as_dict(),
            "spans": [s.as_dict() for s in self.spans],
        }


@dataclass(frozen=True)
class CardDocument:
    """Tag line, optional citation, and the marked-up document body."""

    tag: str
    cite: str | None
    document: TokenizedDocument
    scores: ScoreVector
    selection: SummarySelection

    @property
    def body(self) -> str:
        return self.document.source

    @property
    def settings(self) -> RenderSettings:
        return RenderSettings.from_scores(self.scores, self.selection)


def _token_styles(card: CardDocument) -> list[int]:
    under = card.selection.underlined
    hilite = card.selection.highlighted
    return [
        _HILITE if hilite[i] else (_UNDER if under[i] else _PLAIN)
        for i in range(len(card.document.tokens))
    ]


def _emit_marked_body(card: CardDocument, open_close: dict[int, tuple[str, str]], escape=None) -> str:
    """Walk tokens in order, switching styles at token starts.

    Gaps between tokens keep the running style, so a run of selected
    tokens renders as one continuous stretch; the style is closed after
    the last token, before any trailing text.
    """
    source = card.body
    tokens = card.document.tokens
    styles = _token_styles(card)
    esc = escape if escape is not None else (lambda s: s)

    out = io.StringIO()
    cursor = 0  # char offset; token spans are byte offsets, so map once
    char_spans = _char_spans(card.document)
    current = _PLAIN
    for i, _token in enumerate(tokens):
        start_c, end_c = char_spans[i]
        out.write(esc(source[cursor:start_c]))
        if styles[i] != current:
            if current != _PLAIN:
                out.write(open_close[current][1])
            if styles[i] != _PLAIN:
                out.write(open_close[styles[i]][0])
            current = styles[i]
        out.write(esc(source[start_c:end_c]))
        cursor = end_c
    if current != _PLAIN:
        out.write(open_close[current][1])
    out.write(esc(source[cursor:]))
    return out.getvalue()


def _char_spans(doc: TokenizedDocument) -> list[tuple[int, int]]:
    """Token spans as character offsets (byte offsets are the stored form)."""
    spans = []
    char_pos = 0
    byte_pos = 0
    for token in doc.tokens:
        while byte_pos < token.byte_start:
            byte_pos += len(doc.source[char_pos].encode("utf-8"))
            char_pos += 1
        start_c = char_pos
        end_c = start_c + len(token.text)
        byte_pos = token.byte_end
        char_pos = end_c
        spans.append((start_c, end_c))
    return spans


def render_terminal(card: CardDocument) -> str:
    """Body with SGR styling: 4/24 for underline-only tokens, 43/49 for
    highlighted ones. Empty selection renders the body verbatim."""
    return _emit_marked_body(
        card,
        {
            _UNDER: (SGR_UNDERLINE_ON, SGR_UNDERLINE_OFF),
            _HILITE: (SGR_HIGHLIGHT_ON, SGR_HIGHLIGHT_OFF),
        },
    )


def strip_sgr(text: str) -> str:
    """Remove SGR escape sequences; inverse of render_terminal over the body."""
    return _SGR_RE.sub("", text)


def _render_html_body(card: CardDocument) -> str:
    """Per-token <u>/<mark> wrapping, <mark> nested inside <u> when a token
    is in both tiers; all text HTML-escaped."""
    source = card.body
    char_spans = _char_spans(card.document)
    under = card.selection.underlined
    hilite = card.selection.highlighted

    out = io.StringIO()
    cursor = 0
    for i in range(len(card.document.tokens)):
        start_c, end_c = char_spans[i]
        out.write(html.escape(source[cursor:start_c]))
        text = html.escape(source[start_c:end_c])
        if under[i] and hilite[i]:
            out.write(f"<u><mark>{text}</mark></u>")
        elif hilite[i]:
            out.write(f"<mark>{text}</mark>")
        elif under[i]:
            out.write(f"<u>{text}</u>")
        else:
            out.write(text)
        cursor = end_c
    out.write(html.escape(source[cursor:]))
    return out.getvalue()


def render_html(card: CardDocument) -> str:
    """Full HTML document: tag heading, optional cite line, marked-up body.

    The body container's text content equals the original body exactly.
    """
    s = card.settings
    cite_html = f"<p class=\"cite\">{html.escape(card.cite)}</p>\n" if card.cite else ""
    settings_line = html.escape(
        f"window={s.window} pooling={s.pooling} underline={s.underline_pct}% "
        f"highlight={s.highlight_pct}% embeddings={','.join(s.embedding_names)}"
    )
    return (
        "<!DOCTYPE html>\n"
        "<html>\n<head>\n<meta charset=\"utf-8\">\n"
        f"<title>{html.escape(card.tag)}</title>\n"
        "<style>mark { background: #ffe84d; } .card-body { white-space: pre-wrap; }</style>\n"
        "</head>\n<body>\n"
        f"<h1>{html.escape(card.tag)}</h1>\n"
        f"{cite_html}"
        f"<div class=\"card-body\">{_render_html_body(card)}</div>\n"
        f"<p class=\"settings\">{settings_line}</p>\n"
        "</body>\n</html>\n"
    )


class _BodyTextExtractor(HTMLParser):
    """Pulls the text content of the card-body container back out."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.depth = 0
        self.parts: list[str] = []

    def handle_starttag(self, tag, attrs):
        if self.depth:
            self.depth += 1
        elif tag == "div" and ("class", "card-body") in attrs:
            self.depth = 1

    def handle_endtag(self, tag):
        if self.depth:
            self.depth -= 1

    def handle_data(self, data):
        if self.depth:
            self.parts.append(data)


def extract_html_body_text(document: str) -> str:
    """Text content of the body container of a render_html() document."""
    parser = _BodyTextExtractor()
    parser.feed(document)
    parser.close()
    return "".join(parser.parts)


def build_span_report(card: CardDocument) -> SpanReport:
    """One record per selected token per tier, ordered by byte offset.

    A token in both tiers yields two records, so the record count is
    always |underlined| + |highlighted|.
    """
    records = []
    for i, token in enumerate(card.document.tokens):
        score = card.scores.scores[i]
        if card.selection.underlined[i]:
            records.append(SpanRecord(TIER_UNDERLINE, token.byte_start, token.byte_end, i, score))
        if card.selection.highlighted[i]:
            records.append(SpanRecord(TIER_HIGHLIGHT, token.byte_start, token.byte_end, i, score))
    return SpanReport(spans=tuple(records), settings=card.settings)


def render_spans(card: CardDocument) -> str:
    """Span report serialized as JSON (the same schema the service returns)."""
    return json.dumps(build_span_report(card).as_dict(), ensure_ascii=False, indent=2) + "\n"


def render_card_text(card: CardDocument) -> str:
    """Plain-text card: tag, blank line, cite, blank line, marked body.

    Underlined tokens are wrapped ``_so_``, highlighted ``*so*`` (highlight
    wins). Marker characters already in the body are not escaped — this
    format is advisory; the HTML renderer is the faithful one.
    """
    source = card.body
    char_spans = _char_spans(card.document)
    styles = _token_styles(card)

    out = io.StringIO()
    out.write(card.tag)
    out.write("\n\n")
    if card.cite:
        out.write(card.cite)
        out.write("\n\n")
    cursor = 0
    for i in range(len(card.document.tokens)):
        start_c, end_c = char_spans[i]
        out.write(source[cursor:start_c])
        text = source[start_c:end_c]
        if styles[i] == _HILITE:
            out.write(f"*{text}*")
        elif styles[i] == _UNDER:
            out.write(f"_{text}_")
        else:
            out.write(text)
        cursor = end_c
    out.write(source[cursor:])
    return out.getvalue()
