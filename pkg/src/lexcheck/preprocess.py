"""Text preparation shared by the classifiers and the topic model.

Covers paragraph segmentation, tokenization, stopword removal with a
rule-based suffix stemmer (a deterministic stand-in for lemmatization, with
the rule table shipped as data), and TF-IDF vectorization.
"""
from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import Segment
from .validation import check_fitted, require

TokenStream = list[str]

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_VOWELS = set("aeiou")


def data_path(name: str) -> Path:
    """Path of a bundled data file."""
    return Path(str(resources.files("lexcheck").joinpath("data", name)))


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the stopword list (one token per line, UTF-8)."""
    p = Path(path) if path is not None else data_path("stopwords.txt")
    with open(p, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


@dataclass(frozen=True)
class StemmerRules:
    plural: tuple[tuple[str, str, int], ...]
    y_to_i_min_stem: int
    suffixes: tuple[tuple[str, str, int, bool], ...]


def load_stemmer_rules(path: str | Path | None = None) -> StemmerRules:
    p = Path(path) if path is not None else data_path("stemmer_rules.json")
    with open(p, encoding="utf-8") as fh:
        raw = json.load(fh)
    return StemmerRules(
        plural=tuple((s, r, int(m)) for s, r, m in raw["plural"]),
        y_to_i_min_stem=int(raw["y_to_i_min_stem"]),
        suffixes=tuple((s, r, int(m), bool(u)) for s, r, m, u in raw["suffixes"]),
    )


_DEFAULT_STOPWORDS: frozenset[str] | None = None
_DEFAULT_RULES: StemmerRules | None = None


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords()
    return _DEFAULT_STOPWORDS


def default_stemmer_rules() -> StemmerRules:
    global _DEFAULT_RULES
    if _DEFAULT_RULES is None:
        _DEFAULT_RULES = load_stemmer_rules()
    return _DEFAULT_RULES


def _undouble(word: str) -> str:
    if len(word) >= 2 and word[-1] == word[-2] and word[-1] not in "sz" and word[-1] not in _VOWELS:
        return word[:-1]
    return word


def _stem_pass(word: str, rules: StemmerRules) -> str:
    for suffix, repl, min_stem in rules.plural:
        if word.endswith(suffix) and len(word) - len(suffix) >= min_stem:
            word = word[: -len(suffix)] + repl
            break
    if word.endswith("y") and len(word) - 1 >= rules.y_to_i_min_stem and any(c in _VOWELS for c in word[:-1]):
        word = word[:-1] + "i"
    for suffix, repl, min_stem, undouble in rules.suffixes:
        if word.endswith(suffix) and len(word) - len(suffix) >= min_stem:
            word = word[: -len(suffix)] + repl
            if undouble:
                word = _undouble(word)
            break
    return word


def stem(word: str, rules: StemmerRules | None = None) -> str:
    """Strip suffixes until the word stops changing (so stemming is idempotent)."""
    rules = rules or default_stemmer_rules()
    while True:
        out = _stem_pass(word, rules)
        if out == word:
            return out
        word = out


def tokenize(text: str) -> TokenStream:
    """Lowercase and split on non-alphanumeric boundaries; digit runs survive."""
    return _TOKEN_RE.findall(text.lower())


def normalize(
    tokens: Iterable[str],
    stopwords: frozenset[str] | None = None,
    rules: StemmerRules | None = None,
) -> TokenStream:
    """Drop stopwords and stem the rest.

    Tokens whose stemmed form lands on a stopword are dropped too, which keeps
    the operation idempotent.
    """
    stopwords = stopwords if stopwords is not None else default_stopwords()
    rules = rules or default_stemmer_rules()
    out = []
    for tok in tokens:
        if tok in stopwords:
            continue
        stemmed = stem(tok, rules)
        if stemmed and stemmed not in stopwords:
            out.append(stemmed)
    return out


_BLANK_LINE_SPLIT = re.compile(r"(?:[ \t\r\f\v]*\n){2,}")


def segment_text(document: str, doc_id: str = "doc") -> list[Segment]:
    """Split a document into paragraph segments on runs of blank lines.

    Char spans are UTF-8 byte offsets into the original document and cover
    each trimmed segment.
    """
    # Cumulative byte offset for each character position.
    byte_at = np.zeros(len(document) + 1, dtype=np.int64)
    for i, ch in enumerate(document):
        byte_at[i + 1] = byte_at[i] + len(ch.encode("utf-8"))

    segments = []
    index = 0
    cursor = 0
    for match in list(_BLANK_LINE_SPLIT.finditer(document)) + [None]:
        end = match.start() if match is not None else len(document)
        chunk = document[cursor:end]
        stripped = chunk.strip()
        if stripped:
            lead = len(chunk) - len(chunk.lstrip())
            start_char = cursor + lead
            end_char = start_char + len(stripped)
            segments.append(
                Segment(
                    doc_id=doc_id,
                    index=index,
                    text=stripped,
                    char_span=(int(byte_at[start_char]), int(byte_at[end_char])),
                )
            )
            index += 1
        if match is None:
            break
        cursor = match.end()
    return segments


@dataclass(frozen=True)
class SparseVector:
    """L2-normalized tf-idf entries with strictly ascending column indices."""

    indices: tuple[int, ...]
    values: tuple[float, ...]
    dimension: int

    def __post_init__(self) -> None:
        require(all(0 <= i < self.dimension for i in self.indices), "index out of range")
        require(
            all(a < b for a, b in zip(self.indices, self.indices[1:])),
            "indices must be strictly ascending",
        )
        require(all(math.isfinite(v) for v in self.values), "weights must be finite")

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices, self.values))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension)
        if self.indices:
            dense[list(self.indices)] = self.values
        return dense

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))


class TfidfVectorizer(BaseEstimator):
    """Smoothed tf-idf over token streams with a bounded vocabulary.

    The vocabulary keeps tokens with document frequency >= ``min_df``, ranked
    by descending document frequency with lexicographic tie-break, truncated
    to ``max_vocab``; column indices follow lexicographic order of the kept
    tokens. idf(t) = ln((1 + N) / (1 + df(t))) + 1.
    """

    def __init__(self, min_df: int = 2, max_vocab: int = 10000):
        self.min_df = min_df
        self.max_vocab = max_vocab
        self.vocabulary_: dict[str, int] | None = None
        self.idf_: np.ndarray | None = None

    def fit(self, corpus: Sequence[TokenStream]) -> "TfidfVectorizer":
        require(len(corpus) > 0, "corpus is empty")
        df: Counter[str] = Counter()
        for tokens in corpus:
            df.update(set(tokens))
        kept = [t for t, c in df.items() if c >= self.min_df]
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[: self.max_vocab]
        if not kept:
            raise ValueError("empty vocabulary after document-frequency filtering")
        kept.sort()
        self.vocabulary_ = {t: i for i, t in enumerate(kept)}
        n_docs = len(corpus)
        idf = np.zeros(len(kept))
        for t, i in self.vocabulary_.items():
            idf[i] = math.log((1 + n_docs) / (1 + df[t])) + 1.0
        self.idf_ = idf
        return self

    @property
    def dimension(self) -> int:
        check_fitted(self, ["vocabulary_"])
        return len(self.vocabulary_)

    def transform_one(self, tokens: TokenStream) -> SparseVector:
        check_fitted(self, ["vocabulary_", "idf_"])
        counts: Counter[int] = Counter()
        for tok in tokens:
            col = self.vocabulary_.get(tok)
            if col is not None:
                counts[col] += 1
        if not counts:
            return SparseVector(indices=(), values=(), dimension=len(self.vocabulary_))
        cols = sorted(counts)
        weights = np.array([counts[c] * self.idf_[c] for c in cols])
        weights /= np.linalg.norm(weights)
        return SparseVector(
            indices=tuple(cols), values=tuple(float(w) for w in weights), dimension=len(self.vocabulary_)
        )

    def transform(self, corpus: Sequence[TokenStream]) -> list[SparseVector]:
        return [self.transform_one(tokens) for tokens in corpus]

    def fit_transform(self, corpus: Sequence[TokenStream]) -> list[SparseVector]:
        return self.fit(corpus).transform(corpus)

    def to_json_dict(self) -> dict:
        check_fitted(self, ["vocabulary_", "idf_"])
        return {
            "version": 1,
            "config": {"min_df": self.min_df, "max_vocab": self.max_vocab},
            "vocabulary": self.vocabulary_,
            "idf": [float(v) for v in self.idf_],
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "TfidfVectorizer":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        require(raw.get("version") == 1, f"unsupported vectorizer file version: {raw.get('version')}")
        vec = cls(min_df=raw["config"]["min_df"], max_vocab=raw["config"]["max_vocab"])
        vec.vocabulary_ = {str(t): int(i) for t, i in raw["vocabulary"].items()}
        vec.idf_ = np.array(raw["idf"], dtype=np.float64)
        require(len(vec.idf_) == len(vec.vocabulary_), "idf length does not match vocabulary")
        return vec

    def content_hash(self) -> str:
        import hashlib

        blob = json.dumps(self.to_json_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


def fit_vectorizer(corpus: Sequence[TokenStream], min_df: int = 2, max_vocab: int = 10000) -> TfidfVectorizer:
    return TfidfVectorizer(min_df=min_df, max_vocab=max_vocab).fit(corpus)


def vectorize(vectorizer: TfidfVectorizer, tokens: TokenStream) -> SparseVector:
    return vectorizer.transform_one(tokens)
