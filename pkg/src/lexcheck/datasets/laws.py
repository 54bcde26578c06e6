"""Synthetic statute text in the chapter/section/article layout the parser reads.

The generated regulation has numbered recitals before Chapter I and one
article per heading, with chapter-thematic vocabulary so topic modelling on
the fixture produces interpretable groupings. Segment lengths are drawn so
the corpus-wide mean word count lands near 75 words per segment, matching
the scale of the real regulation text this stands in for.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..preprocess import TokenStream
from .lexicon import CLUSTERS, CORE_WORDS, FILLER_WORDS, FUNCTION_WORDS

# Chapter themes cycle through these cluster mixes.
_CHAPTER_THEMES = (
    ("legal", "purpose"),
    ("collection", "purpose"),
    ("access", "deletion"),
    ("security", "legal"),
    ("retention", "time"),
    ("sharing", "legal"),
    ("choice", "purpose"),
    ("audience", "legal"),
    ("contact", "legal"),
    ("policy_change", "time"),
    ("legal", "contact"),
)

_ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI")


def _theme_words(rng: np.random.RandomState, theme: tuple[str, str], n: int) -> list[str]:
    primary, secondary = theme
    words = []
    for _ in range(n):
        r = rng.random_sample()
        if r < 0.30:
            words.append(FUNCTION_WORDS[rng.randint(len(FUNCTION_WORDS))])
        elif r < 0.42:
            pool = FILLER_WORDS + CORE_WORDS
            words.append(pool[rng.randint(len(pool))])
        elif r < 0.78:
            pool = CLUSTERS[primary]
            words.append(pool[rng.randint(len(pool))])
        else:
            pool = CLUSTERS[secondary]
            words.append(pool[rng.randint(len(pool))])
    return words


def _sentence_case(words: list[str]) -> str:
    if not words:
        return ""
    return words[0].capitalize() + " " + " ".join(words[1:]) + "."


def _paragraphs(rng: np.random.RandomState, theme, total_words: int, numbered: bool) -> list[str]:
    parts = []
    remaining = total_words
    number = 1
    while remaining > 0:
        chunk = int(min(remaining, rng.randint(20, 45)))
        remaining -= chunk
        words = _theme_words(rng, theme, chunk)
        text = _sentence_case(words)
        if numbered:
            parts.append(f"{number}. {text}")
            number += 1
        else:
            parts.append(text)
    return parts


def make_regulation_text(
    n_recitals: int = 272,
    n_articles: int = 99,
    seed: int = 7,
    mean_words: float = 75.0,
    sd_words: float = 14.0,
) -> str:
    """Build a full-scale regulation fixture with recitals and articles."""
    rng = np.random.RandomState(seed)
    lines = [
        "REGULATION (FIXTURE) OF THE DEMO AUTHORITY",
        "on the protection of natural persons with regard to the processing of personal data",
        "",
        "Whereas:",
        "",
    ]

    for n in range(1, n_recitals + 1):
        theme = _CHAPTER_THEMES[n % len(_CHAPTER_THEMES)]
        # Budget minus the recital marker token "(n)".
        target = max(30, int(rng.normal(mean_words, sd_words)) - 1)
        words = _theme_words(rng, theme, target)
        lines.append(f"({n}) {_sentence_case(words)}")
        lines.append("")

    # Spread articles across 11 chapters; chapters 3 and 4 carry sections.
    bounds = np.linspace(0, n_articles, len(_CHAPTER_THEMES) + 1).astype(int)
    article = 1
    for c, theme in enumerate(_CHAPTER_THEMES):
        lines.append(f"CHAPTER {_ROMAN[c]}")
        title_words = _theme_words(rng, theme, 4)
        lines.append(" ".join(w for w in title_words if w).upper())
        lines.append("")
        chapter_articles = range(bounds[c], bounds[c + 1])
        section_no = 0
        for i, _ in enumerate(chapter_articles):
            if c in (2, 3) and i % 4 == 0:
                section_no += 1
                lines.append(f"Section {section_no}")
                lines.append("")
            # Budget minus the heading tokens ("Article", number, 3 title words).
            target = max(30, int(rng.normal(mean_words, sd_words)) - 5)
            lines.append(f"Article {article}")
            lines.append(" ".join(_theme_words(rng, theme, 3)).title())
            for para in _paragraphs(rng, theme, target, numbered=True):
                lines.append(para)
            lines.append("")
            article += 1
    return "\n".join(lines) + "\n"


def make_two_vocabulary_corpus(
    n_docs: int = 20,
    vocab_size: int = 10,
    doc_length: tuple[int, int] = (40, 60),
    seed: int = 0,
) -> tuple[list[TokenStream], list[int]]:
    """Docs drawn from two disjoint vocabularies, with their group labels."""
    rng = np.random.RandomState(seed)
    vocab_a = [f"alpha{i}" for i in range(vocab_size)]
    vocab_b = [f"beta{i}" for i in range(vocab_size)]
    docs = []
    groups = []
    for d in range(n_docs):
        group = d % 2
        vocab = vocab_a if group == 0 else vocab_b
        length = int(rng.randint(doc_length[0], doc_length[1] + 1))
        docs.append([vocab[rng.randint(vocab_size)] for _ in range(length)])
        groups.append(group)
    return docs, groups
