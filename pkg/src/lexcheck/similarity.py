"""Sentence embeddings, similarity measures, and the STS evaluation harness.

Embeddings come from pluggable providers: a static word-vector table pooled
by averaging, or a file of precomputed vectors produced offline (e.g. by a
transformer encoder). The engine never runs a neural model in-process.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .preprocess import StemmerRules, TokenStream, normalize, tokenize
from .validation import check_same_dimension, require


class Measure(enum.Enum):
    COSINE = "cosine"
    EUCLIDEAN = "euclidean"

    @classmethod
    def parse(cls, value: str) -> "Measure":
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown similarity measure: {value!r}") from None


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]


@dataclass(frozen=True)
class SentenceVector:
    values: np.ndarray
    provider_id: str
    all_oov: bool = False

    def __post_init__(self) -> None:
        require(self.values.ndim == 1 and len(self.values) > 0, "sentence vector must be 1-D and non-empty")
        require(bool(np.all(np.isfinite(self.values))), "sentence vector contains non-finite values")

    @property
    def dimension(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return not np.any(self.values)


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    measure: Measure
    zero_vector: bool = False


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a whitespace-separated word-vector file (word v1 ... vd per line)."""
    vectors: dict[str, np.ndarray] = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2 or not parts[0]:
                if line.strip():
                    raise ValueError(f"{path}:{lineno}: malformed embedding line")
                continue
            word = parts[0]
            values = np.array([float(v) for v in parts[1:]], dtype=np.float64)
            if dimension is None:
                dimension = len(values)
            elif len(values) != dimension:
                raise ValueError(
                    f"{path}:{lineno}: expected dimension {dimension}, got {len(values)}"
                )
            vectors[word] = values
    if not vectors:
        raise ValueError(f"empty embedding file: {path}")
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def embed_mean(table: EmbeddingTable, tokens: TokenStream, provider_id: str = "static") -> SentenceVector:
    """Arithmetic mean of the in-vocabulary token vectors.

    All-out-of-vocabulary input yields the zero vector with the ``all_oov``
    flag set, so downstream scoring can warn instead of aborting.
    """
    hits = [table.vectors[t] for t in tokens if t in table.vectors]
    if not hits:
        return SentenceVector(values=np.zeros(table.dimension), provider_id=provider_id, all_oov=True)
    return SentenceVector(values=np.mean(hits, axis=0), provider_id=provider_id)


def load_precomputed(path: str | Path) -> dict[str, SentenceVector]:
    """Load the embedding exchange file (JSON Lines: key, dim, values, provider)."""
    out: dict[str, SentenceVector] = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as err:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {err}") from None
            key = raw["key"]
            if key in out:
                raise ValueError(f"{path}:{lineno}: duplicate segment key: {key!r}")
            values = np.asarray(raw["values"], dtype=np.float64)
            if int(raw["dim"]) != len(values):
                raise ValueError(f"{path}:{lineno}: declared dim {raw['dim']} != {len(values)} values")
            if dimension is None:
                dimension = len(values)
            elif len(values) != dimension:
                raise ValueError(f"{path}:{lineno}: expected dimension {dimension}, got {len(values)}")
            out[key] = SentenceVector(values=values, provider_id=str(raw.get("provider", "precomputed")))
    if not out:
        raise ValueError(f"empty precomputed embedding file: {path}")
    return out


def cosine(a: SentenceVector, b: SentenceVector) -> SimilarityScore:
    """Cosine similarity; defined as 0 (flagged) when either vector is zero."""
    check_same_dimension(a.values, b.values)
    na = float(np.linalg.norm(a.values))
    nb = float(np.linalg.norm(b.values))
    if na == 0.0 or nb == 0.0:
        return SimilarityScore(value=0.0, measure=Measure.COSINE, zero_vector=True)
    value = float(np.dot(a.values, b.values) / (na * nb))
    # Rounding can push |value| a hair past 1 for near-parallel vectors.
    value = min(1.0, max(-1.0, value))
    return SimilarityScore(value=value, measure=Measure.COSINE)


def euclidean(a: SentenceVector, b: SentenceVector) -> SimilarityScore:
    check_same_dimension(a.values, b.values)
    return SimilarityScore(
        value=float(np.linalg.norm(a.values - b.values)), measure=Measure.EUCLIDEAN
    )


def score(a: SentenceVector, b: SentenceVector, measure: Measure) -> SimilarityScore:
    return cosine(a, b) if measure is Measure.COSINE else euclidean(a, b)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation of two equal-length sequences."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    require(len(xa) == len(ya), "sequences must have equal length")
    require(len(xa) >= 2, "need at least two points")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = float(np.sqrt(np.sum(xc * xc)))
    sy = float(np.sqrt(np.sum(yc * yc)))
    require(sx > 0 and sy > 0, "zero variance input")
    return float(np.sum(xc * yc) / (sx * sy))


class StaticTableProvider:
    """Mean-pooled static word vectors behind the provider interface."""

    def __init__(
        self,
        table: EmbeddingTable,
        apply_normalize: bool = True,
        stopwords: frozenset[str] | None = None,
        rules: StemmerRules | None = None,
        provider_id: str = "static",
    ):
        self.table = table
        self.apply_normalize = apply_normalize
        self.stopwords = stopwords
        self.rules = rules
        self.provider_id = provider_id

    def embed(self, text: str, key: str | None = None) -> SentenceVector:
        tokens = tokenize(text)
        if self.apply_normalize:
            tokens = normalize(tokens, stopwords=self.stopwords, rules=self.rules)
        return embed_mean(self.table, tokens, provider_id=self.provider_id)


class PrecomputedProvider:
    """Vectors from an exchange file, looked up by key and then by raw text."""

    def __init__(self, mapping: dict[str, SentenceVector], provider_id: str = "precomputed"):
        require(len(mapping) > 0, "precomputed provider has no vectors")
        self.mapping = mapping
        self.provider_id = provider_id
        self.dimension = next(iter(mapping.values())).dimension

    def embed(self, text: str, key: str | None = None) -> SentenceVector:
        if key is not None and key in self.mapping:
            return self.mapping[key]
        if text in self.mapping:
            return self.mapping[text]
        return SentenceVector(values=np.zeros(self.dimension), provider_id=self.provider_id, all_oov=True)


def get_provider(spec: str, apply_normalize: bool = True):
    """Build a provider from a selection string: ``static:<path>`` or ``precomputed:<path>``."""
    kind, sep, path = spec.partition(":")
    require(bool(sep) and bool(path), f"provider must look like static:<path> or precomputed:<path>, got {spec!r}")
    if kind == "static":
        return StaticTableProvider(load_embeddings(path), apply_normalize=apply_normalize, provider_id=spec)
    if kind == "precomputed":
        return PrecomputedProvider(load_precomputed(path), provider_id=spec)
    raise ValueError(f"unknown provider kind: {kind!r}")


@dataclass(frozen=True)
class STSResult:
    pearson: float
    n: int
    skipped: int


def load_sts_pairs(path: str | Path) -> list[tuple[float, str, str]]:
    """Read an STS file: gold_score TAB sentence1 TAB sentence2."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                gold = float(parts[0])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: gold score is not a number: {parts[0]!r}") from None
            pairs.append((gold, parts[1], parts[2]))
    return pairs


def sts_eval(pairs_file: str | Path, provider) -> STSResult:
    """Pearson between gold scores and provider cosine over scorable pairs.

    A pair is skipped (and counted) only when both sentences embed to the
    all-out-of-vocabulary zero vector.
    """
    pairs = load_sts_pairs(pairs_file)
    golds = []
    sims = []
    skipped = 0
    for gold, s1, s2 in pairs:
        v1 = provider.embed(s1)
        v2 = provider.embed(s2)
        if v1.all_oov and v2.all_oov:
            skipped += 1
            continue
        golds.append(gold)
        sims.append(cosine(v1, v2).value)
    require(len(golds) >= 2, f"not enough scorable pairs ({len(golds)}) to correlate")
    return STSResult(pearson=pearson(golds, sims), n=len(golds), skipped=skipped)
