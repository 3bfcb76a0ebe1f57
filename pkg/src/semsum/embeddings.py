"""Static word-vector tables: loading, stacking, lookup, and pooling.

Vector files are plain text, one token per line followed by its vector
components. GloVe-style files have no header; word2vec text files start
with a ``<count> <dim>`` header line. Multiple tables can be stacked so
vectors are concatenated at lookup time.

Vectors are held as float32; mean pooling accumulates exactly via
``math.fsum`` so reordering the inputs can never change the result.
"""

from __future__ import annotations

import enum
import hashlib
import io
import logging
import math
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence, Union

import numpy as np

from .tokenizer import candidate_forms

logger = logging.getLogger(__name__)


class VectorFileError(ValueError):
    """Problem in a word-vector file; carries the offending line number."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class MalformedLineError(VectorFileError):
    """A data line does not have a token plus at least one component."""


class InconsistentDimensionError(VectorFileError):
    """A data line's vector length differs from the table's dimension."""


class UnparsableNumberError(VectorFileError):
    """A vector component is not a decimal float."""


class EmptyFileError(VectorFileError):
    """The stream contains no data lines."""


class PoolingError(ValueError):
    pass


class EmptyInputError(PoolingError):
    pass


class LengthMismatchError(PoolingError):
    pass


class VectorFormat(enum.Enum):
    WORD2VEC_TEXT = "word2vec"
    GLOVE_TEXT = "glove"
    AUTO = "auto"


class PoolingMode(enum.Enum):
    """How a set of vectors is reduced to one (elementwise)."""

    MEAN = "mean"
    MAX = "max"
    MIN = "min"

    @classmethod
    def parse(cls, name: str) -> "PoolingMode":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown pooling mode {name!r}; expected mean, max, or min")


@dataclass(frozen=True)
class EmbeddingTable:
    """Token -> float32 vector map with a fixed dimension."""

    name: str
    dimension: int
    entries: dict[str, np.ndarray]
    duplicate_count: int = 0
    digest: str = field(default="", compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if not self.entries:
            raise ValueError("table must contain at least one entry")
        for token, vec in self.entries.items():
            if not token:
                raise ValueError("token keys must be non-empty")
            if vec.shape != (self.dimension,):
                raise ValueError(
                    f"vector for {token!r} has length {vec.shape}, expected {self.dimension}"
                )
        if not self.digest:
            object.__setattr__(self, "digest", _table_digest(self.name, self.entries))

    def __len__(self) -> int:
        return len(self.entries)


def _table_digest(name: str, entries: dict[str, np.ndarray]) -> str:
    """Content fingerprint; stable across load order."""
    h = hashlib.sha256()
    h.update(name.encode("utf-8"))
    for token in sorted(entries):
        h.update(b"\x00")
        h.update(token.encode("utf-8"))
        h.update(entries[token].tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class EmbeddingStack:
    """Ordered tables whose vectors concatenate at lookup time."""

    tables: tuple[EmbeddingTable, ...]
    total_dimension: int = 0

    def __post_init__(self):
        if not self.tables:
            raise ValueError("stack must contain at least one table")
        object.__setattr__(self, "tables", tuple(self.tables))
        total = sum(t.dimension for t in self.tables)
        if self.total_dimension and self.total_dimension != total:
            raise ValueError(
                f"total_dimension {self.total_dimension} != sum of table dimensions {total}"
            )
        object.__setattr__(self, "total_dimension", total)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tables)

    @property
    def identity(self) -> str:
        """Stable identifier for cache fingerprints."""
        h = hashlib.sha256()
        for table in self.tables:
            h.update(table.digest.encode("ascii"))
        return h.hexdigest()


def load_vectors(
    source: Union[BinaryIO, str, os.PathLike],
    format_hint: VectorFormat = VectorFormat.AUTO,
    name: str | None = None,
) -> EmbeddingTable:
    """Parse a GloVe or word2vec text stream into an EmbeddingTable.

    ``source`` may be a binary stream or a file path. AUTO treats a first
    line of exactly two integer fields as a word2vec header. Duplicate
    tokens keep the last occurrence; the count is surfaced on the table
    and logged.
    """
    if isinstance(source, (str, os.PathLike)):
        table_name = name if name is not None else os.path.basename(os.fspath(source))
        with open(source, "rb") as fh:
            return _parse_vectors(fh, format_hint, table_name)
    return _parse_vectors(source, format_hint, name if name is not None else "<stream>")


def _parse_vectors(stream: BinaryIO, format_hint: VectorFormat, name: str) -> EmbeddingTable:
    text = io.TextIOWrapper(stream, encoding="utf-8")
    entries: dict[str, np.ndarray] = {}
    dimension = 0
    duplicates = 0
    first_data_line = True
    header_checked = False

    for line_no, line in enumerate(text, start=1):
        fields = line.split()
        if not fields:
            continue  # blank lines (common as trailing newline) are skipped
        if not header_checked:
            header_checked = True
            if _looks_like_header(fields, format_hint):
                continue
        if len(fields) < 2:
            raise MalformedLineError(
                f"expected '<token> <v1> ... <vd>', got {len(fields)} field(s)", line_no
            )
        token, values = fields[0], fields[1:]
        if first_data_line:
            dimension = len(values)
            first_data_line = False
        elif len(values) != dimension:
            raise InconsistentDimensionError(
                f"vector has {len(values)} components, table dimension is {dimension}", line_no
            )
        try:
            vec = np.array([float(v) for v in values], dtype=np.float32)
        except ValueError:
            raise UnparsableNumberError(f"non-numeric vector component in {values}", line_no)
        if token in entries:
            duplicates += 1
        entries[token] = vec

    if not entries:
        raise EmptyFileError("no vector entries found", None)
    if duplicates:
        logger.warning("%s: %d duplicate token line(s), last occurrence kept", name, duplicates)
    return EmbeddingTable(name=name, dimension=dimension, entries=entries, duplicate_count=duplicates)


def _looks_like_header(fields: list[str], format_hint: VectorFormat) -> bool:
    if format_hint is VectorFormat.GLOVE_TEXT:
        return False
    is_header = len(fields) == 2 and all(_is_integer(f) for f in fields)
    if format_hint is VectorFormat.WORD2VEC_TEXT and not is_header:
        raise MalformedLineError("expected a '<count> <dim>' header line", 1)
    return is_header


def _is_integer(field_text: str) -> bool:
    try:
        int(field_text)
    except ValueError:
        return False
    return True


def _resolve(table: EmbeddingTable, token_text: str) -> np.ndarray | None:
    for form in candidate_forms(token_text):
        vec = table.entries.get(form)
        if vec is not None:
            return vec
    return None


def lookup(stack: EmbeddingStack, token_text: str) -> np.ndarray:
    """Concatenated vector for ``token_text``, one block per table.

    Each table resolves independently through the candidate-form chain
    (exact, lowercase, punctuation-stripped, stripped lowercase); a table
    with no hit contributes zeros of its own dimension, so out-of-vocabulary
    text never fails.
    """
    parts = []
    for table in stack.tables:
        vec = _resolve(table, token_text)
        parts.append(vec if vec is not None else np.zeros(table.dimension, dtype=np.float32))
    if len(parts) == 1:
        return parts[0]
    return np.concatenate(parts)


def pool_rows(rows: Sequence[Sequence[float]], mode: PoolingMode) -> np.ndarray:
    """Reduce equal-length rows elementwise; shared by pool() and scoring.

    MEAN sums each component with math.fsum (exact, so any permutation of
    the rows yields the identical float) and divides in float64 before
    rounding back to float32. MAX/MIN are exact elementwise extrema.
    """
    if mode is PoolingMode.MEAN:
        count = len(rows)
        means = [math.fsum(col) / count for col in zip(*rows)]
        return np.array(means, dtype=np.float32)
    arr = np.asarray(rows, dtype=np.float32)
    if mode is PoolingMode.MAX:
        return arr.max(axis=0)
    return arr.min(axis=0)


def pool(vectors: Iterable[Sequence[float]], mode: PoolingMode = PoolingMode.MEAN) -> np.ndarray:
    """Pool a non-empty list of equal-length vectors into one float32 vector."""
    rows = [np.asarray(v, dtype=np.float32) for v in vectors]
    if not rows:
        raise EmptyInputError("cannot pool an empty list of vectors")
    length = rows[0].shape
    if len(length) != 1:
        raise LengthMismatchError("pool expects 1-d vectors")
    for row in rows[1:]:
        if row.shape != length:
            raise LengthMismatchError(f"vector lengths differ: {row.shape[0]} vs {length[0]}")
    return pool_rows(rows, mode)
