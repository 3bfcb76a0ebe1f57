"""Whitespace tokenization that keeps exact byte spans.

Tokens are maximal runs of non-whitespace characters; punctuation stays
attached to its word. Byte offsets index into the UTF-8 encoding of the
source text, so renderers and API clients can mark up the original
document without re-tokenizing it.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

_TOKEN_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    """One document word plus its exact location in the source."""

    text: str
    byte_start: int
    byte_end: int  # exclusive
    index: int

    def __post_init__(self):
        if self.byte_start >= self.byte_end:
            raise ValueError(f"empty span for token {self.index}")


@dataclass(frozen=True)
class TokenizedDocument:
    """Original text together with its ordered tokens."""

    source: str
    tokens: tuple[Token, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize(source: str) -> TokenizedDocument:
    """Split ``source`` on Unicode whitespace, recording byte spans.

    Reassembling the inter-token gaps and token texts reproduces the
    source byte-exactly; an empty or all-whitespace source yields zero
    tokens.
    """
    tokens = []
    # Running char->byte position so offsets are O(len(source)) overall.
    char_pos = 0
    byte_pos = 0
    for idx, match in enumerate(_TOKEN_RE.finditer(source)):
        start_c, end_c = match.span()
        byte_pos += len(source[char_pos:start_c].encode("utf-8"))
        byte_start = byte_pos
        byte_pos += len(source[start_c:end_c].encode("utf-8"))
        char_pos = end_c
        tokens.append(Token(match.group(), byte_start, byte_pos, idx))
    return TokenizedDocument(source=source, tokens=tuple(tokens))


def _strip_punctuation(text: str) -> str:
    """Drop leading/trailing Unicode punctuation (category P*)."""
    start = 0
    end = len(text)
    while start < end and unicodedata.category(text[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(text[end - 1]).startswith("P"):
        end -= 1
    return text[start:end]


def candidate_forms(text: str) -> list[str]:
    """Fallback forms to try, in order, when resolving a token to a vector.

    Exact text first, then lowercased, then with surrounding punctuation
    stripped, then the stripped lowercase. Consecutive duplicates are
    collapsed and empty forms (all-punctuation tokens) are skipped, so a
    token like ``"..."`` keeps only its exact form.
    """
    stripped = _strip_punctuation(text)
    forms = [text, text.lower(), stripped, stripped.lower()]
    out: list[str] = []
    for form in forms:
        if form and (not out or form != out[-1]):
            out.append(form)
    return out


def lookup_candidates(token: Token) -> list[str]:
    """Candidate strings for ``token``, in canonical fallback order."""
    return candidate_forms(token.text)
