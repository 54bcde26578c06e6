"""Generator for the demo static word-vector table.

Cluster words sit near a per-cluster anchor direction (private subspace plus
the affinities declared in the lexicon); everything else gets its own random
direction. The table is keyed by stemmed forms because the static provider
normalizes text before pooling.
"""
from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable

import numpy as np

from ..preprocess import normalize, tokenize
from .lexicon import AFFINITY, CLUSTERS, CORE_WORDS, FILLER_WORDS, GENERIC_WORDS

CLUSTER_NOISE = 0.55  # spread of cluster words around their anchor
GENERIC_NORM = 0.25  # vector norm of everyday words vs 1.0 for specific terms


def _word_rng(word: str, salt: str) -> np.random.RandomState:
    digest = hashlib.sha256(f"{salt}:{word}".encode("utf-8")).digest()
    return np.random.RandomState(int.from_bytes(digest[:4], "big"))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _anchors(dim: int) -> dict[str, np.ndarray]:
    names = sorted(CLUSTERS)
    if 3 * len(names) > dim:
        raise ValueError(f"dimension {dim} too small for {len(names)} clusters")
    private = {}
    for i, name in enumerate(names):
        rng = _word_rng(name, "anchor")
        v = np.zeros(dim)
        v[3 * i : 3 * i + 3] = rng.normal(size=3)
        private[name] = _unit(v)
    anchors = {}
    for name in names:
        v = private[name].copy()
        for other, weight in AFFINITY.get(name, {}).items():
            v = v + weight * private[other]
        anchors[name] = _unit(v)
    return anchors


def make_static_table(
    path: str | Path,
    dim: int = 50,
    extra_texts: Iterable[str] = (),
    cluster_noise: float = CLUSTER_NOISE,
) -> int:
    """Write a word-vector file covering the lexicon plus any extra texts.

    Returns the number of entries written. Unknown words from ``extra_texts``
    get noise-only vectors, so nothing the bundled fixtures mention is ever
    out of vocabulary.
    """
    anchors = _anchors(dim)

    stem_cluster: dict[str, str] = {}
    for name in sorted(CLUSTERS):
        for word in CLUSTERS[name]:
            for s in normalize(tokenize(word)):
                stem_cluster.setdefault(s, name)

    generic_stems: set[str] = set()
    for word in GENERIC_WORDS:
        generic_stems.update(normalize(tokenize(word)))

    noise_stems: set[str] = set()
    for word in list(FILLER_WORDS) + list(CORE_WORDS):
        noise_stems.update(normalize(tokenize(word)))
    for text in extra_texts:
        noise_stems.update(normalize(tokenize(text)))
    noise_stems -= set(stem_cluster)

    rows = []
    for s in sorted(stem_cluster):
        rng = _word_rng(s, "word")
        v = _unit(anchors[stem_cluster[s]] + cluster_noise * rng.normal(size=dim) / np.sqrt(dim))
        if s in generic_stems:
            v = GENERIC_NORM * v
        rows.append((s, v))
    for s in sorted(noise_stems):
        rng = _word_rng(s, "word")
        v = _unit(rng.normal(size=dim))
        if s in generic_stems:
            v = GENERIC_NORM * v
        rows.append((s, v))

    rows.sort(key=lambda r: r[0])
    with open(path, "w", encoding="utf-8") as fh:
        for word, v in rows:
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    return len(rows)
