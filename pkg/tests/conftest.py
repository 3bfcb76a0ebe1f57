"""Shared fixtures: random toy embedding tables built in two forms at once,
one for the library (float32 numpy) and one for the brute-force oracle
(plain Python floats), from identical values."""

from __future__ import annotations

import random
import string

import numpy as np
import pytest

from semsum.embeddings import EmbeddingStack, EmbeddingTable

from oracle import round32


def make_tables(rng: random.Random, vocab: list[str], dims: list[int], low=-1.0, high=1.0):
    """Build stacked tables over ``vocab``; returns (EmbeddingStack, oracle tables)."""
    lib_tables = []
    oracle_tables = []
    for t, dim in enumerate(dims):
        entries = {}
        oracle_entries = {}
        for token in vocab:
            values = [round32(rng.uniform(low, high)) for _ in range(dim)]
            entries[token] = np.array(values, dtype=np.float32)
            oracle_entries[token] = values
        lib_tables.append(EmbeddingTable(name=f"table{t}", dimension=dim, entries=entries))
        oracle_tables.append(oracle_entries)
    return EmbeddingStack(tables=tuple(lib_tables)), oracle_tables


def random_vocab(rng: random.Random, size: int) -> list[str]:
    vocab = set()
    while len(vocab) < size:
        vocab.add("".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(2, 8))))
    return sorted(vocab)


def random_doc_tokens(rng: random.Random, vocab: list[str], n: int, oov_rate=0.1) -> list[str]:
    tokens = []
    for _ in range(n):
        if rng.random() < oov_rate:
            tokens.append("zz" + "".join(rng.choice(string.digits) for _ in range(4)))
        else:
            tokens.append(rng.choice(vocab))
    return tokens


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def toy_stack():
    """Tiny deterministic two-token stack used by example-level tests."""
    table = EmbeddingTable(
        name="toy",
        dimension=2,
        entries={
            "cat": np.array([1.0, 0.0], dtype=np.float32),
            "dog": np.array([0.0, 1.0], dtype=np.float32),
        },
    )
    return EmbeddingStack(tables=(table,))
