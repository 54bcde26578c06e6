"""Segmentation, tokenization, normalization, and tf-idf vectorization."""
from __future__ import annotations

import math
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexcheck.preprocess import (
    SparseVector,
    TfidfVectorizer,
    fit_vectorizer,
    normalize,
    segment_text,
    stem,
    tokenize,
    vectorize,
)

token_lists = st.lists(
    st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789", min_size=1, max_size=12),
    max_size=30,
)


class TestSegmentText:
    def test_blank_line_splits(self):
        segments = segment_text("A\n\nB")
        assert [s.text for s in segments] == ["A", "B"]

    def test_single_newline_does_not_split(self):
        segments = segment_text("A\nB")
        assert [s.text for s in segments] == ["A\nB"]

    def test_whitespace_only_lines_count_as_blank(self):
        segments = segment_text("A\n  \t \nB")
        assert [s.text for s in segments] == ["A", "B"]

    def test_three_paragraph_reconstruction(self):
        doc = "First paragraph here.\n\n\nSecond one,\nspanning two lines.\n\nThird.\n\n\n"
        segments = segment_text(doc)
        assert len(segments) == 3
        rebuilt = "".join(s.text for s in segments)
        assert re.sub(r"\s+", "", rebuilt) == re.sub(r"\s+", "", doc)

    def test_spans_index_into_source(self):
        doc = "  alpha beta\n\n gamma  \n\n"
        for seg in segment_text(doc):
            raw = doc.encode("utf-8")[seg.char_span[0] : seg.char_span[1]].decode("utf-8")
            assert raw == seg.text

    def test_spans_are_utf8_byte_offsets(self):
        doc = "café one\n\nsegment two"
        first, second = segment_text(doc)
        raw = doc.encode("utf-8")
        assert raw[first.char_span[0] : first.char_span[1]].decode("utf-8") == "café one"
        assert raw[second.char_span[0] : second.char_span[1]].decode("utf-8") == "segment two"

    def test_empty_document(self):
        assert segment_text("") == []
        assert segment_text("  \n \n\n ") == []

    @given(st.text(alphabet="ab \n\t.", max_size=200))
    @settings(max_examples=200)
    def test_content_preserved_modulo_whitespace(self, doc):
        rebuilt = "".join(s.text for s in segment_text(doc))
        assert re.sub(r"\s+", "", rebuilt) == re.sub(r"\s+", "", doc)


class TestTokenize:
    def test_punctuation_stripped(self):
        assert tokenize("Data, data!") == ["data", "data"]

    def test_empty(self):
        assert tokenize("") == []

    def test_alphanumeric_boundaries(self):
        assert tokenize("Article 14(1)(d)") == ["article", "14", "1", "d"]

    def test_digits_survive(self):
        assert tokenize("GDPR 2016/679") == ["gdpr", "2016", "679"]


class TestNormalize:
    def test_stopwords_and_stemming(self):
        assert normalize(["the", "data", "was", "processed"]) == ["data", "process"]

    def test_empty(self):
        assert normalize([]) == []

    @given(token_lists)
    @settings(max_examples=100)
    def test_idempotent(self, tokens):
        once = normalize(tokens)
        assert normalize(once) == once

    @given(token_lists)
    @settings(max_examples=100)
    def test_never_increases_token_count(self, tokens):
        assert len(normalize(tokens)) <= len(tokens)

    def test_stemmer_unifies_word_families(self):
        assert stem("policies") == stem("policy")
        assert stem("security") == stem("secure")
        assert stem("collected") == stem("collection")
        assert stem("compliance") == stem("comply")


class TestVectorizer:
    def test_idf_of_everywhere_token_is_one(self):
        vec = fit_vectorizer([["data", "x"], ["data", "y"], ["data", "z"]], min_df=1)
        assert vec.idf_[vec.vocabulary_["data"]] == pytest.approx(1.0, abs=1e-12)

    def test_idf_formula(self):
        vec = fit_vectorizer([["rare", "a"], ["a", "b"], ["b", "c"]], min_df=1)
        assert vec.idf_[vec.vocabulary_["rare"]] == pytest.approx(math.log(4 / 2) + 1, abs=1e-9)
        assert vec.idf_[vec.vocabulary_["rare"]] == pytest.approx(1.6931, abs=1e-4)

    def test_max_vocab_keeps_highest_df(self):
        corpus = [
            ["common", "shared", "u1"],
            ["common", "shared", "u2"],
            ["common", "u3"],
            ["common", "u4"],
            ["shared", "u5"],
        ]
        vec = fit_vectorizer(corpus, min_df=1, max_vocab=2)
        assert set(vec.vocabulary_) == {"common", "shared"}

    def test_df_ties_break_lexicographically(self):
        corpus = [["zeta", "alpha"], ["zeta", "alpha"], ["beta"], ["beta"]]
        vec = fit_vectorizer(corpus, min_df=1, max_vocab=3)
        assert set(vec.vocabulary_) == {"alpha", "beta", "zeta"}
        vec2 = fit_vectorizer(corpus, min_df=1, max_vocab=1)
        assert set(vec2.vocabulary_) == {"alpha"}

    def test_empty_vocabulary_raises(self):
        with pytest.raises(ValueError, match="empty vocabulary"):
            fit_vectorizer([["a"], ["b"]], min_df=2)

    def test_single_token_is_unit_vector(self):
        vec = fit_vectorizer([["data", "x"], ["data"]], min_df=1)
        sv = vectorize(vec, ["data"])
        assert sv.entries == [(vec.vocabulary_["data"], pytest.approx(1.0))]

    def test_all_oov_is_zero_vector(self):
        vec = fit_vectorizer([["data"], ["data", "x"]], min_df=1)
        sv = vectorize(vec, ["unseen", "tokens"])
        assert sv.entries == []
        assert sv.dimension == vec.dimension

    def test_weights_match_hand_computation(self):
        # df(a) = 2 and df(b) = 2 over 3 docs, so idf = ln(4/3) + 1 for both;
        # the query doc has tf(a) = 2, tf(b) = 1.
        corpus = [["a", "a", "b"], ["a", "c"], ["c", "b"]]
        vec = fit_vectorizer(corpus, min_df=1)
        idf_a = math.log(4 / 3) + 1
        idf_b = math.log(4 / 3) + 1
        raw = np.array([2 * idf_a, 1 * idf_b])
        expected = raw / np.linalg.norm(raw)
        sv = vectorize(vec, ["a", "a", "b"])
        got = dict(sv.entries)
        assert got[vec.vocabulary_["a"]] == pytest.approx(expected[0], abs=1e-12)
        assert got[vec.vocabulary_["b"]] == pytest.approx(expected[1], abs=1e-12)

    @given(token_lists)
    @settings(max_examples=100)
    def test_output_norm_is_one_or_zero(self, tokens):
        vec = fit_vectorizer([["data", "x"], ["data", "y"], ["z"]], min_df=1)
        norm = vectorize(vec, tokens).norm()
        assert abs(norm - 1.0) < 1e-9 or norm == 0.0

    def test_save_load_round_trip(self, tmp_path):
        vec = fit_vectorizer([["data", "x"], ["data", "y"]], min_df=1)
        vec.save(tmp_path / "vec.json")
        loaded = TfidfVectorizer.load(tmp_path / "vec.json")
        assert loaded.vocabulary_ == vec.vocabulary_
        assert np.allclose(loaded.idf_, vec.idf_)
        assert loaded.content_hash() == vec.content_hash()

    def test_sklearn_get_params(self):
        vec = TfidfVectorizer(min_df=3, max_vocab=50)
        assert vec.get_params() == {"min_df": 3, "max_vocab": 50}


class TestSparseVector:
    def test_rejects_descending_indices(self):
        with pytest.raises(ValueError):
            SparseVector(indices=(2, 1), values=(0.5, 0.5), dimension=3)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SparseVector(indices=(5,), values=(1.0,), dimension=3)

    def test_to_dense(self):
        sv = SparseVector(indices=(0, 2), values=(0.6, 0.8), dimension=4)
        assert np.allclose(sv.to_dense(), [0.6, 0.0, 0.8, 0.0])
