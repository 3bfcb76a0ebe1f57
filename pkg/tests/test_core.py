
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import make_tables, random_doc_tokens, random_vocab
from semsum.core import (
    BiasQuery,
    EmptyDocumentError,
    EmptyQueryError,
    IndexOutOfRangeError,
    LengthMismatchError,
    PercentOutOfRangeError,
    PoolingMode,
    cosine,
    query_vector,
    ranked_indices,
    resummarize,
    score,
    score_document,
    select,
    window_bounds,
)
from semsum.tokenizer import tokenize


class TestWindowBounds:
    def test_start_of_document_scaling(self):
        # W=6 start-of-document ramp: 3 tokens at i=0, full-size by i=3.
        assert window_bounds(0, 100, 6) == (0, 2)
        assert window_bounds(4, 100, 6) == (1, 6)

    def test_first_full_window(self):
        assert window_bounds(3, 100, 6) == (0, 5)

    def test_single_token_windows(self):
        for k in [0, 3, 99]:
            assert window_bounds(k, 100, 1) == (k, k)

    def test_interior_window_has_exactly_w_tokens(self):
        for w in range(1, 9):
            for i in range(20):
                lo, hi = window_bounds(i, 20, w)
                assert lo <= i <= hi
                left = w // 2
                if left <= i <= 19 - (w - 1 - left):
                    assert hi - lo + 1 == w

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            window_bounds(5, 5, 3)
        with pytest.raises(IndexOutOfRangeError):
            window_bounds(-1, 5, 3)

    @given(
        st.integers(min_value=1, max_value=50),
        st.integers(min_value=1, max_value=12),
    )
    def test_sizes_are_unimodal(self, n, w):
        sizes = [hi - lo + 1 for lo, hi in (window_bounds(i, n, w) for i in range(n))]
        peak = max(sizes)
        first_peak = sizes.index(peak)
        last_peak = n - 1 - sizes[::-1].index(peak)
        assert all(sizes[i] <= sizes[i + 1] for i in range(first_peak))
        assert all(sizes[i] == peak for i in range(first_peak, last_peak + 1))
        assert all(sizes[i] >= sizes[i + 1] for i in range(last_peak, n - 1))

    @given(
        st.integers(min_value=1, max_value=50),
        st.integers(min_value=1, max_value=12),
    )
    def test_matches_oracle(self, n, w):
        for i in range(n):
            assert window_bounds(i, n, w) == oracle.window(i, n, w)


class TestCosine:
    def test_orthogonal(self):
        assert cosine([1, 0], [0, 1]) == 0.0

    def test_scale_invariant(self):
        assert cosine([2, 0], [1, 0]) == 1.0

    def test_zero_norm_is_zero(self):
        assert cosine([0, 0], [1, 0]) == 0.0
        assert cosine([1, 0], [0, 0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            cosine([1, 0], [1, 0, 0])

    def test_opposite_vectors(self):
        assert cosine([1, 2], [-1, -2]) == pytest.approx(-1.0, abs=1e-12)


class TestQueryVector:
    def test_single_token_identity(self, toy_stack):
        doc = tokenize("whatever")
        qvec = query_vector(BiasQuery.parse("cat"), doc, toy_stack)
        assert qvec.tolist() == [1.0, 0.0]

    def test_two_token_mean(self, toy_stack):
        qvec = query_vector(BiasQuery.parse("cat dog"), tokenize("x"), toy_stack)
        assert qvec.tolist() == [0.5, 0.5]

    def test_unbiased_sentinel_equals_document_text(self, toy_stack):
        doc = tokenize("cat dog")
        unbiased = query_vector(BiasQuery.parse("-1"), doc, toy_stack)
        explicit = query_vector(BiasQuery.parse("cat dog"), doc, toy_stack)
        assert unbiased.tobytes() == explicit.tobytes()

    def test_empty_query_rejected(self, toy_stack):
        with pytest.raises(EmptyQueryError):
            query_vector(BiasQuery.parse("   "), tokenize("cat"), toy_stack)

    def test_unbiased_needs_tokens(self, toy_stack):
        with pytest.raises(EmptyDocumentError):
            query_vector(BiasQuery.parse("-1"), tokenize(""), toy_stack)


class TestScoreDocument:
    def test_w1_reduces_to_per_word_cosine(self, toy_stack):
        doc = tokenize("cat dog")
        sv = score_document(doc, toy_stack, 1, PoolingMode.MEAN, np.array([1.0, 0.0]))
        assert sv.scores == (1.0, 0.0)

    def test_w2_windows_follow_the_clipping_formula(self, toy_stack):
        # i=0 keeps only its own token (the single left-context slot is
        # clipped away), i=1 spans both tokens: windows (0,0) and (0,1).
        doc = tokenize("cat dog")
        qvec = np.array([1.0, 0.0])
        sv = score_document(doc, toy_stack, 2, PoolingMode.MEAN, qvec)
        expected = oracle.scores(["cat", "dog"], [{"cat": [1.0, 0.0], "dog": [0.0, 1.0]}], [2], 2, "mean", [1.0, 0.0])
        assert expected[0] == 1.0
        assert expected[1] == pytest.approx(0.7071067811865476, abs=1e-12)
        for got, want in zip(sv.scores, expected):
            assert got == pytest.approx(want, abs=1e-9)

    def test_empty_document_rejected(self, toy_stack):
        with pytest.raises(EmptyDocumentError):
            score_document(tokenize(""), toy_stack, 1, PoolingMode.MEAN, np.array([1.0, 0.0]))

    def test_dimension_mismatch_rejected(self, toy_stack):
        with pytest.raises(LengthMismatchError):
            score_document(tokenize("cat"), toy_stack, 1, PoolingMode.MEAN, np.array([1.0]))

    def test_matches_bruteforce_oracle_on_random_doc(self, rng):
        vocab = random_vocab(rng, 30)
        stack, oracle_tables = make_tables(rng, vocab, [3])
        tokens = random_doc_tokens(rng, vocab, 20)
        doc = tokenize(" ".join(tokens))
        query = BiasQuery.parse(" ".join(random_doc_tokens(rng, vocab, 3)))
        for mode in PoolingMode:
            sv = score(doc, stack, query, window=4, mode=mode)
            qv = oracle.query_vec(query.text.split(), oracle_tables, [3], mode.value)
            expected = oracle.scores(tokens, oracle_tables, [3], 4, mode.value, qv)
            assert len(sv.scores) == len(expected)
            for got, want in zip(sv.scores, expected):
                assert got == pytest.approx(want, abs=1e-9)

    def test_scores_stay_in_range(self, rng):
        vocab = random_vocab(rng, 10)
        stack, _ = make_tables(rng, vocab, [4], low=-3, high=3)
        doc = tokenize(" ".join(random_doc_tokens(rng, vocab, 30)))
        sv = score(doc, stack, BiasQuery.parse(vocab[0]), window=5)
        assert all(-1.0 <= s <= 1.0 for s in sv.scores)

    def test_fingerprint_distinguishes_settings(self, toy_stack):
        doc = tokenize("cat dog")
        a = score(doc, toy_stack, BiasQuery.parse("cat"), window=1)
        b = score(doc, toy_stack, BiasQuery.parse("cat"), window=2)
        c = score(doc, toy_stack, BiasQuery.parse("dog"), window=1)
        d = score(doc, toy_stack, BiasQuery.parse("cat"), window=1, mode=PoolingMode.MAX)
        again = score(doc, toy_stack, BiasQuery.parse("cat"), window=1)
        assert len({a.fingerprint, b.fingerprint, c.fingerprint, d.fingerprint}) == 4
        assert a.fingerprint == again.fingerprint
        assert a.scores == again.scores


class TestSelect:
    def scores_of(self, values):
        return score_like(values)

    def test_percentages_from_reference_settings(self):
        sv = score_like([0.9, 0.1, 0.5])
        sel = select(sv, 70, 65)
        # ceil(0.70*3)=3 underlined, ceil(0.65*3)=2 highlighted.
        assert mask_set(sel.underlined) == {0, 1, 2}
        assert mask_set(sel.highlighted) == {0, 2}

    def test_tie_break_prefers_earlier_index(self):
        sv = score_like([0.5, 0.5, 0.5])
        sel = select(sv, 20, 0)
        assert mask_set(sel.underlined) == {0}
        assert mask_set(sel.highlighted) == set()

    def test_ceil_keeps_counts_exact_on_ties(self):
        # ceil(0.34*3) = 2, and the two earliest of the tied tokens win.
        sv = score_like([0.5, 0.5, 0.5])
        sel = select(sv, 34, 0)
        assert mask_set(sel.underlined) == {0, 1}

    def test_boundaries(self):
        sv = score_like([0.3, 0.2, 0.1])
        assert mask_set(select(sv, 100, 0).underlined) == {0, 1, 2}
        assert mask_set(select(sv, 0, 0).underlined) == set()

    def test_percent_out_of_range(self):
        sv = score_like([0.5])
        for bad in (-1, 101, 100.5):
            with pytest.raises(PercentOutOfRangeError):
                select(sv, bad, 0)
            with pytest.raises(PercentOutOfRangeError):
                select(sv, 0, bad)

    def test_highlight_independent_of_underline(self):
        # h > u is allowed; the masks are computed independently.
        sv = score_like([0.9, 0.1, 0.5])
        sel = select(sv, 0, 100)
        assert mask_set(sel.underlined) == set()
        assert mask_set(sel.highlighted) == {0, 1, 2}

    def test_single_token_rounds_up(self):
        sel = select(score_like([0.2]), 50, 0)
        assert mask_set(sel.underlined) == {0}

    def test_matches_oracle_ranking(self, rng):
        values = [rng.uniform(-1, 1) for _ in range(40)] + [0.25, 0.25, 0.25]
        rng.shuffle(values)
        sv = score_like(values)
        assert ranked_indices(sv.scores) == oracle.ranking(values)
        for pct in (0, 10, 33, 50, 100):
            assert mask_set(select(sv, pct, 0).underlined) == oracle.selection(values, pct)


class TestResummarize:
    def test_equals_select_bit_for_bit(self, rng):
        values = [rng.uniform(-1, 1) for _ in range(25)]
        sv = score_like(values)
        for u, h in [(70, 65), (0, 0), (100, 100), (33.5, 12.25)]:
            assert resummarize(sv, u, h) == select(sv, u, h)

    def test_shrinking_percentages_nest(self):
        sv = score_like([0.8, 0.1, 0.4, 0.9, 0.2])
        first = resummarize(sv, 70, 65)
        second = resummarize(sv, 50, 40)
        assert mask_set(second.underlined) <= mask_set(first.underlined)
        assert mask_set(second.highlighted) <= mask_set(first.highlighted)

    @settings(max_examples=60)
    @given(
        st.lists(st.floats(min_value=-1, max_value=1, allow_nan=False), min_size=1, max_size=30),
        st.integers(min_value=0, max_value=100),
        st.integers(min_value=0, max_value=100),
    )
    def test_monotone_nesting(self, values, u1, u2):
        lo, hi = sorted((u1, u2))
        sv = score_like(values)
        assert mask_set(select(sv, lo, 0).underlined) <= mask_set(select(sv, hi, 0).underlined)
        assert mask_set(select(sv, 0, lo).highlighted) <= mask_set(select(sv, 0, hi).highlighted)

    def test_nested_masks_when_h_below_u(self):
        sv = score_like([0.6, 0.2, 0.9, 0.1])
        sel = select(sv, 75, 50)
        assert mask_set(sel.highlighted) <= mask_set(sel.underlined)


def score_like(values):
    """ScoreVector stub for selection tests (fields beyond scores inert)."""
    from semsum.core import ScoreVector

    return ScoreVector(
        scores=tuple(float(v) for v in values),
        fingerprint="test",
        window=6,
        pooling=PoolingMode.MEAN,
        query="q",
        embedding_names=("toy",),
    )


def mask_set(mask):
    return {i for i, flag in enumerate(mask) if flag}
