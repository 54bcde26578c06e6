"""Law-side machinery: structural parsing, topic modelling, requirement configs.

The regulation parser turns a plain-text statute with CHAPTER / Section /
Article headings (plus numbered recitals before the first chapter) into one
segment per article and per recital. The Gibbs-sampled topic model exists as
a labelling aid for whoever curates the requirement configs; compliance
scoring itself consumes only the curated configs.
"""
from __future__ import annotations

import enum
import json
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .preprocess import TokenStream
from .validation import check_fitted, require


class LawParseError(Exception):
    """Raised when a statute text does not match the expected structure."""


class ConfigError(Exception):
    """Raised for invalid requirement / mapping / calibration config files."""


class Law(enum.Enum):
    GDPR = "GDPR"
    PDPA = "PDPA"

    @classmethod
    def parse(cls, value: str) -> "Law":
        try:
            return cls(value.upper())
        except ValueError:
            raise ConfigError(f"unknown law: {value!r}") from None


class RequirementCategory(enum.Enum):
    """Disclosure obligations a policy is checked against."""

    GDPR1 = "GDPR1"  # what data will be collected and why
    GDPR2 = "GDPR2"  # how data will be processed
    GDPR3 = "GDPR3"  # how long data will be retained
    GDPR4 = "GDPR4"  # who can be contacted to have data removed or produced
    PDPA_CONSENT = "PDPA_Consent"
    PDPA_PURPOSE_NOTIFICATION = "PDPA_PurposeNotification"
    PDPA_ACCESS_CORRECTION = "PDPA_AccessCorrection"
    PDPA_RETENTION = "PDPA_Retention"

    @classmethod
    def parse(cls, value: str) -> "RequirementCategory":
        for member in cls:
            if member.value == value:
                return member
        raise ConfigError(f"unknown requirement category: {value!r}")

    @property
    def law(self) -> Law:
        return Law.GDPR if self.value.startswith("GDPR") else Law.PDPA

    @classmethod
    def for_law(cls, law: Law) -> list["RequirementCategory"]:
        return [m for m in cls if m.law == law]


@dataclass(frozen=True)
class LawSegment:
    law: Law
    article_id: str
    text: str
    chapter: str | None = None
    section: str | None = None
    article: str | None = None
    char_span: tuple[int, int] = (0, 0)

    def word_count(self) -> int:
        return len(self.text.split())


@dataclass(frozen=True)
class RequirementSegment:
    """Curated excerpt of law text tagged with the obligation it expresses."""

    requirement: RequirementCategory
    segment_id: str
    article_refs: tuple[str, ...]
    text: str


_CHAPTER_RE = re.compile(r"^\s*CHAPTER\s+([IVXLCDM]+|\d+)\b\s*(.*)$")
_SECTION_RE = re.compile(r"^\s*Section\s+(\d+)\b\s*(.*)$")
_ARTICLE_RE = re.compile(r"^\s*Article\s+(\d+)\b\s*(.*)$")
_RECITAL_RE = re.compile(r"^\s*\((\d+)\)\s*(.*)$")


def parse_gdpr(text: str, law: Law = Law.GDPR) -> list[LawSegment]:
    """Segment a regulation text by article, with one segment per recital.

    Recitals are the ``(n) ...`` blocks before the first CHAPTER heading. An
    article segment runs from its heading line to the next Article, Section,
    or CHAPTER heading.
    """
    lines = text.split("\n")
    # Character offset of the start of each line.
    offsets = np.zeros(len(lines) + 1, dtype=np.int64)
    for i, line in enumerate(lines):
        offsets[i + 1] = offsets[i] + len(line) + 1

    first_chapter = next((i for i, l in enumerate(lines) if _CHAPTER_RE.match(l)), len(lines))

    segments: list[LawSegment] = []

    # Recitals: scan the preamble for numbered blocks.
    recital_starts = [
        i for i in range(first_chapter) if _RECITAL_RE.match(lines[i])
    ]
    for pos, start in enumerate(recital_starts):
        end = recital_starts[pos + 1] if pos + 1 < len(recital_starts) else first_chapter
        number = _RECITAL_RE.match(lines[start]).group(1)
        body = "\n".join(lines[start:end]).strip()
        if body:
            segments.append(
                LawSegment(
                    law=law,
                    article_id=f"Rec.{number}",
                    text=body,
                    char_span=(int(offsets[start]), int(offsets[start]) + len("\n".join(lines[start:end]).rstrip())),
                )
            )

    # Articles: walk the enacting terms, tracking the enclosing headings.
    chapter = section = None
    article_start = None
    article_number = None
    article_chapter = None
    article_section = None

    def flush(end_line: int) -> None:
        nonlocal article_start, article_number
        if article_start is None:
            return
        body = "\n".join(lines[article_start:end_line]).rstrip()
        if body.strip():
            segments.append(
                LawSegment(
                    law=law,
                    article_id=f"Art.{article_number}",
                    text=body.strip(),
                    chapter=article_chapter,
                    section=article_section,
                    article=article_number,
                    char_span=(int(offsets[article_start]), int(offsets[article_start]) + len(body)),
                )
            )
        article_start = None
        article_number = None

    for i in range(first_chapter, len(lines)):
        line = lines[i]
        m = _CHAPTER_RE.match(line)
        if m:
            flush(i)
            chapter = m.group(1)
            section = None
            continue
        m = _SECTION_RE.match(line)
        if m:
            flush(i)
            section = m.group(1)
            continue
        m = _ARTICLE_RE.match(line)
        if m:
            flush(i)
            article_start = i
            article_number = m.group(1)
            article_chapter = chapter
            article_section = section
    flush(len(lines))

    if not any(seg.article is not None for seg in segments):
        raise LawParseError("no Article headings found in law text")

    seen: set[str] = set()
    for seg in segments:
        require(seg.article_id not in seen, f"duplicate article id {seg.article_id}", LawParseError)
        seen.add(seg.article_id)
    return segments


class GibbsLda(BaseEstimator):
    """Latent topic model fitted by collapsed Gibbs sampling.

    For each token the conditional over topics is proportional to
    ``(n_tw + beta) / (n_t + V*beta) * (n_dt + alpha)``. A fixed seed makes
    the whole trajectory reproducible.
    """

    def __init__(
        self,
        k: int = 10,
        alpha: float | None = None,
        beta: float = 0.01,
        iterations: int = 1000,
        seed: int = 0,
    ):
        self.k = k
        self.alpha = alpha
        self.beta = beta
        self.iterations = iterations
        self.seed = seed
        self.vocabulary_: dict[str, int] | None = None
        self.topic_word_counts_: np.ndarray | None = None
        self.doc_topic_counts_: np.ndarray | None = None
        self.assignments_: np.ndarray | None = None
        self.doc_ids_: np.ndarray | None = None
        self.word_ids_: np.ndarray | None = None

    @property
    def effective_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.k

    def fit(self, docs: Sequence[TokenStream], sweep_callback: Callable[["GibbsLda"], None] | None = None) -> "GibbsLda":
        require(self.k >= 1, "k must be at least 1")
        require(len(docs) > 0, "no documents to fit")
        vocab = sorted({tok for doc in docs for tok in doc})
        require(len(vocab) > 0, "documents contain no tokens")
        self.vocabulary_ = {w: i for i, w in enumerate(vocab)}

        doc_ids = []
        word_ids = []
        for d, doc in enumerate(docs):
            for tok in doc:
                doc_ids.append(d)
                word_ids.append(self.vocabulary_[tok])
        n_tokens = len(word_ids)
        require(self.k <= n_tokens, f"k={self.k} exceeds total token count {n_tokens}")

        self.doc_ids_ = np.asarray(doc_ids, dtype=np.int64)
        self.word_ids_ = np.asarray(word_ids, dtype=np.int64)

        k, V, D = self.k, len(vocab), len(docs)
        rng = np.random.RandomState(self.seed)
        z = np.zeros(n_tokens, dtype=np.int64) if k == 1 else rng.randint(0, k, size=n_tokens)

        topic_word = np.zeros((k, V), dtype=np.int64)
        doc_topic = np.zeros((D, k), dtype=np.int64)
        topic_total = np.zeros(k, dtype=np.int64)
        np.add.at(topic_word, (z, self.word_ids_), 1)
        np.add.at(doc_topic, (self.doc_ids_, z), 1)
        np.add.at(topic_total, z, 1)

        alpha = self.effective_alpha
        beta = self.beta
        v_beta = V * beta

        if k > 1:
            for _ in range(self.iterations):
                draws = rng.random_sample(n_tokens)
                for i in range(n_tokens):
                    d = doc_ids[i]
                    w = word_ids[i]
                    old = z[i]
                    topic_word[old, w] -= 1
                    doc_topic[d, old] -= 1
                    topic_total[old] -= 1

                    p = (topic_word[:, w] + beta) / (topic_total + v_beta) * (doc_topic[d] + alpha)
                    cumulative = np.cumsum(p)
                    new = int(np.searchsorted(cumulative, draws[i] * cumulative[-1], side="right"))
                    new = min(new, k - 1)

                    z[i] = new
                    topic_word[new, w] += 1
                    doc_topic[d, new] += 1
                    topic_total[new] += 1
                self.topic_word_counts_ = topic_word
                self.doc_topic_counts_ = doc_topic
                self.assignments_ = z
                if sweep_callback is not None:
                    sweep_callback(self)
        else:
            self.topic_word_counts_ = topic_word
            self.doc_topic_counts_ = doc_topic
            self.assignments_ = z
            if sweep_callback is not None:
                sweep_callback(self)

        self.topic_word_counts_ = topic_word
        self.doc_topic_counts_ = doc_topic
        self.assignments_ = z
        return self

    def counts_consistent(self) -> bool:
        """Both conservation invariants: totals match the token multiset."""
        check_fitted(self, ["topic_word_counts_", "doc_topic_counts_"])
        total = len(self.word_ids_)
        if int(self.topic_word_counts_.sum()) != total:
            return False
        doc_lengths = np.bincount(self.doc_ids_, minlength=self.doc_topic_counts_.shape[0])
        return bool(np.array_equal(self.doc_topic_counts_.sum(axis=1), doc_lengths))

    def phi(self) -> np.ndarray:
        """Smoothed point estimate of the topic-word distributions."""
        check_fitted(self, ["topic_word_counts_"])
        counts = self.topic_word_counts_.astype(np.float64)
        return (counts + self.beta) / (counts.sum(axis=1, keepdims=True) + counts.shape[1] * self.beta)

    def theta(self) -> np.ndarray:
        """Smoothed point estimate of the document-topic distributions."""
        check_fitted(self, ["doc_topic_counts_"])
        counts = self.doc_topic_counts_.astype(np.float64)
        return (counts + self.effective_alpha) / (
            counts.sum(axis=1, keepdims=True) + self.k * self.effective_alpha
        )

    def top_words(self, top_n: int = 10) -> list[list[tuple[str, int]]]:
        """Per topic: the ``top_n`` highest-count words with their counts."""
        check_fitted(self, ["topic_word_counts_", "vocabulary_"])
        id_to_word = {i: w for w, i in self.vocabulary_.items()}
        out = []
        for t in range(self.k):
            row = self.topic_word_counts_[t]
            order = sorted(range(len(row)), key=lambda i: (-row[i], id_to_word[i]))
            out.append([(id_to_word[i], int(row[i])) for i in order[:top_n] if row[i] > 0])
        return out

    def dominant_topics(self) -> np.ndarray:
        check_fitted(self, ["doc_topic_counts_"])
        return np.argmax(self.doc_topic_counts_, axis=1)


def lda_fit(
    docs: Sequence[TokenStream],
    k: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
    sweep_callback: Callable[[GibbsLda], None] | None = None,
) -> GibbsLda:
    return GibbsLda(k=k, alpha=alpha, beta=beta, iterations=iterations, seed=seed).fit(
        docs, sweep_callback=sweep_callback
    )


def _doc_word_ids(model: GibbsLda, docs: Sequence[TokenStream]) -> list[list[int]]:
    vocab = model.vocabulary_
    return [[vocab[t] for t in doc if t in vocab] for doc in docs]


def perplexity(model: GibbsLda, docs: Sequence[TokenStream]) -> float:
    """exp(-mean token log-likelihood) under the smoothed point estimates.

    For the training documents theta comes straight from the fitted counts;
    tokens outside the model vocabulary are ignored.
    """
    check_fitted(model, ["topic_word_counts_", "doc_topic_counts_"])
    require(
        len(docs) == model.doc_topic_counts_.shape[0],
        "perplexity expects the documents the model was fitted on",
    )
    phi = model.phi()
    theta = model.theta()
    total_ll = 0.0
    total_tokens = 0
    for d, word_ids in enumerate(_doc_word_ids(model, docs)):
        if not word_ids:
            continue
        probs = theta[d] @ phi[:, word_ids]
        total_ll += float(np.sum(np.log(probs)))
        total_tokens += len(word_ids)
    require(total_tokens > 0, "no in-vocabulary tokens to score")
    return float(math.exp(-total_ll / total_tokens))


def coherence_umass(model: GibbsLda, docs: Sequence[TokenStream], top_n: int = 10) -> float:
    """Mean over topics of sum_{i<j} ln((D(w_i, w_j) + 1) / D(w_j)).

    D counts documents of the training corpus containing a word (or both
    words of a pair); words are each topic's ``top_n`` by count.
    """
    require(top_n >= 2, "top_n must be at least 2")
    doc_sets = [set(doc) for doc in docs]
    scores = []
    for words in model.top_words(top_n=top_n):
        tokens = [w for w, _ in words]
        if len(tokens) < 2:
            continue
        doc_freq = {w: sum(1 for s in doc_sets if w in s) for w in tokens}
        score = 0.0
        for i in range(len(tokens)):
            for j in range(i + 1, len(tokens)):
                wi, wj = tokens[i], tokens[j]
                co = sum(1 for s in doc_sets if wi in s and wj in s)
                score += math.log((co + 1) / doc_freq[wj])
        scores.append(score)
    require(len(scores) > 0, "no topic had two scoreable words")
    return float(np.mean(scores))


@dataclass(frozen=True)
class KSelectionRow:
    k: int
    perplexity: float
    coherence: float
    topic_segment_counts: tuple[int, ...]

    @property
    def sparse_topics(self) -> tuple[int, ...]:
        """Topics that ended up with two or fewer segments."""
        return tuple(t for t, c in enumerate(self.topic_segment_counts) if c <= 2)


@dataclass(frozen=True)
class KSelectionReport:
    rows: tuple[KSelectionRow, ...]

    def to_tsv(self) -> str:
        lines = ["k\tperplexity\tcoherence\ttopic_segment_counts\tsparse_topics"]
        for row in self.rows:
            lines.append(
                "\t".join(
                    [
                        str(row.k),
                        f"{row.perplexity:.6f}",
                        f"{row.coherence:.6f}",
                        ",".join(str(c) for c in row.topic_segment_counts),
                        ",".join(str(t) for t in row.sparse_topics),
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def select_k(
    docs: Sequence[TokenStream],
    k_grid: Sequence[int],
    seeds: Sequence[int] = (0,),
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 200,
    top_n: int = 10,
) -> KSelectionReport:
    """Fit the grid and report perplexity/coherence so a human can pick k.

    Nothing is selected automatically; the chosen k stays configuration.
    Metric values are means over ``seeds``; the per-topic segment counts come
    from the first seed's model.
    """
    require(len(k_grid) > 0, "k grid is empty")
    require(len(seeds) > 0, "need at least one seed")
    rows = []
    for k in k_grid:
        perplexities = []
        coherences = []
        first_model = None
        for seed in seeds:
            model = lda_fit(docs, k=k, alpha=alpha, beta=beta, iterations=iterations, seed=seed)
            if first_model is None:
                first_model = model
            perplexities.append(perplexity(model, docs))
            coherences.append(coherence_umass(model, docs, top_n=top_n))
        counts = np.bincount(first_model.dominant_topics(), minlength=k)
        rows.append(
            KSelectionRow(
                k=k,
                perplexity=float(np.mean(perplexities)),
                coherence=float(np.mean(coherences)),
                topic_segment_counts=tuple(int(c) for c in counts),
            )
        )
    return KSelectionReport(rows=tuple(rows))


def top_words_tsv(model: GibbsLda, top_n: int = 10) -> str:
    """TSV dump (topic_id, rank, word, count) for external word-cloud tooling."""
    lines = ["topic_id\trank\tword\tcount"]
    for t, words in enumerate(model.top_words(top_n=top_n)):
        for rank, (word, count) in enumerate(words, start=1):
            lines.append(f"{t}\t{rank}\t{word}\t{count}")
    return "\n".join(lines) + "\n"


def load_requirements(config_path: str | Path) -> list[RequirementSegment]:
    """Load a curated requirement config and check it covers its law.

    The file is versioned JSON: ``{version, law, segments: [{id, requirement,
    article_refs, text}]}``. Every requirement category of the law must have
    at least one segment.
    """
    path = Path(config_path)
    if not path.is_file():
        raise ConfigError(f"requirement config not found: {path}")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    require(raw.get("version") == 1, f"unsupported requirement config version: {raw.get('version')}", ConfigError)
    law = Law.parse(raw["law"])
    segments = []
    seen_ids: set[str] = set()
    for entry in raw["segments"]:
        requirement = RequirementCategory.parse(entry["requirement"])
        require(
            requirement.law == law,
            f"requirement {requirement.value} does not belong to {law.value}",
            ConfigError,
        )
        seg_id = str(entry["id"])
        require(seg_id not in seen_ids, f"duplicate requirement segment id: {seg_id}", ConfigError)
        seen_ids.add(seg_id)
        text = str(entry["text"]).strip()
        require(bool(text), f"requirement segment {seg_id} has empty text", ConfigError)
        segments.append(
            RequirementSegment(
                requirement=requirement,
                segment_id=seg_id,
                article_refs=tuple(str(r) for r in entry.get("article_refs", [])),
                text=text,
            )
        )
    covered = {seg.requirement for seg in segments}
    for category in RequirementCategory.for_law(law):
        require(category in covered, f"requirement {category.value} has no segments in {path.name}", ConfigError)
    return segments


def requirements_law(segments: Sequence[RequirementSegment]) -> Law:
    laws = {seg.requirement.law for seg in segments}
    require(len(laws) == 1, "requirement segments mix laws")
    return next(iter(laws))
