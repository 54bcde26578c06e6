"""Synthetic annotated policy corpus in the internal annotation format.

Mimics the shape of the public annotated-policy corpus this pipeline is
designed for: one file per policy, three annotators per segment, multi-label
segments whose wording correlates with their categories. Annotator noise
leaves real work for quorum consolidation, and wording overlap between
related categories keeps classifier scores away from a perfect 1.0.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..corpus import CategoryLabel, RawLabelRecord, write_annotations
from ..preprocess import data_path
from .lexicon import CATEGORY_MIX, CLUSTERS, CORE_WORDS, FILLER_WORDS, FUNCTION_WORDS

# Marginal frequency of each category as the primary label of a segment.
CATEGORY_WEIGHTS: dict[CategoryLabel, float] = {
    CategoryLabel.FIRST_PARTY_COLLECTION_USE: 0.28,
    CategoryLabel.THIRD_PARTY_SHARING_COLLECTION: 0.18,
    CategoryLabel.OTHER: 0.11,
    CategoryLabel.USER_CHOICE_CONTROL: 0.10,
    CategoryLabel.DATA_SECURITY: 0.09,
    CategoryLabel.USER_ACCESS_EDIT_DELETION: 0.08,
    CategoryLabel.POLICY_CHANGE: 0.07,
    CategoryLabel.INTERNATIONAL_SPECIFIC_AUDIENCES: 0.05,
    CategoryLabel.DATA_RETENTION: 0.055,
    CategoryLabel.DO_NOT_TRACK: 0.015,
}

SECOND_LABEL_PROB = 0.30
THIRD_LABEL_PROB = 0.06
ANNOTATOR_DROP_PROB = 0.15
ANNOTATOR_ADD_PROB = 0.08
FUNCTION_WORD_PROB = 0.28
FILLER_PROB = 0.17
CROSS_NOISE_PROB = 0.13


def _draw_words(rng: np.random.RandomState, category: CategoryLabel, n: int) -> list[str]:
    mix = CATEGORY_MIX[category]
    names = sorted(mix)
    probs = np.array([mix[c] for c in names])
    probs = probs / probs.sum()
    all_cluster_words = sorted({w for ws in CLUSTERS.values() for w in ws})
    words = []
    for _ in range(n):
        r = rng.random_sample()
        if r < FUNCTION_WORD_PROB:
            words.append(FUNCTION_WORDS[rng.randint(len(FUNCTION_WORDS))])
        elif r < FUNCTION_WORD_PROB + FILLER_PROB:
            pool = FILLER_WORDS + CORE_WORDS
            words.append(pool[rng.randint(len(pool))])
        elif r < FUNCTION_WORD_PROB + FILLER_PROB + CROSS_NOISE_PROB:
            words.append(all_cluster_words[rng.randint(len(all_cluster_words))])
        else:
            cluster = names[rng.choice(len(names), p=probs)]
            pool = CLUSTERS[cluster]
            words.append(pool[rng.randint(len(pool))])
    return words


def _render_sentences(rng: np.random.RandomState, words: list[str]) -> str:
    out = []
    i = 0
    while i < len(words):
        length = int(rng.randint(7, 14))
        sentence = words[i : i + length]
        i += length
        if sentence:
            out.append(sentence[0].capitalize() + " " + " ".join(sentence[1:]) + ".")
    return " ".join(out)


def _segment_labels(rng: np.random.RandomState) -> list[CategoryLabel]:
    categories = list(CATEGORY_WEIGHTS)
    probs = np.array([CATEGORY_WEIGHTS[c] for c in categories])
    probs = probs / probs.sum()
    labels = [categories[rng.choice(len(categories), p=probs)]]
    if rng.random_sample() < SECOND_LABEL_PROB:
        extra = categories[rng.choice(len(categories), p=probs)]
        if extra not in labels:
            labels.append(extra)
    if rng.random_sample() < THIRD_LABEL_PROB:
        extra = categories[rng.randint(len(categories))]
        if extra not in labels:
            labels.append(extra)
    return labels


def make_policy_corpus(
    root: str | Path,
    n_policies: int = 115,
    seed: int = 7,
    segments_per_policy: tuple[int, int] = (16, 26),
    n_annotators: int = 3,
) -> list[Path]:
    """Write a synthetic annotated corpus; returns the per-policy file paths."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.RandomState(seed)
    paths = []
    for p in range(n_policies):
        doc_id = f"policy{p:03d}"
        records: list[RawLabelRecord] = []
        n_segments = int(rng.randint(segments_per_policy[0], segments_per_policy[1] + 1))
        for index in range(n_segments):
            true_labels = _segment_labels(rng)
            n_words = int(rng.randint(28, 60))
            words = []
            for label in true_labels:
                words.extend(_draw_words(rng, label, n_words // len(true_labels)))
            text = _render_sentences(rng, words)
            for a in range(n_annotators):
                annotator = f"annotator{a}"
                assigned = [l for l in true_labels if rng.random_sample() >= ANNOTATOR_DROP_PROB]
                if rng.random_sample() < ANNOTATOR_ADD_PROB:
                    categories = list(CATEGORY_WEIGHTS)
                    assigned.append(categories[rng.randint(len(categories))])
                if not assigned:
                    assigned = [true_labels[0]] if rng.random_sample() < 0.5 else []
                for label in sorted(set(assigned), key=lambda l: l.value):
                    records.append(
                        RawLabelRecord(
                            doc_id=doc_id,
                            annotator_id=annotator,
                            segment_index=index,
                            category=label,
                            text=text,
                        )
                    )
        path = root / f"{doc_id}.tsv"
        write_annotations(path, records)
        paths.append(path)
    return paths


def sample_policy_text() -> str:
    """The bundled realistic policy document used by demos and tests."""
    with open(data_path("sample_policy.txt"), encoding="utf-8") as fh:
        return fh.read()
