"""Synthetic sentence-pair similarity file in the benchmark exchange format."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .lexicon import CLUSTERS, CORE_WORDS, FILLER_WORDS


def _sentence(rng: np.random.RandomState, cluster: str, n: int = 10) -> list[str]:
    pool = CLUSTERS[cluster]
    words = [pool[rng.randint(len(pool))] for _ in range(n - 2)]
    words += [FILLER_WORDS[rng.randint(len(FILLER_WORDS))], CORE_WORDS[rng.randint(len(CORE_WORDS))]]
    return words


def make_sts_file(path: str | Path, pairs_per_grade: int = 18, seed: int = 11) -> int:
    """Write gold TAB sentence1 TAB sentence2 rows; returns the pair count.

    Higher grades share more tokens (and stay within one cluster); the lowest
    grades pair unrelated clusters.
    """
    rng = np.random.RandomState(seed)
    names = sorted(CLUSTERS)
    rows = []
    for gold in range(6):
        for _ in range(pairs_per_grade):
            c1 = names[rng.randint(len(names))]
            first = _sentence(rng, c1)
            if gold >= 2:
                c2 = c1
            else:
                c2 = names[rng.randint(len(names))]
                while c2 == c1:
                    c2 = names[rng.randint(len(names))]
            keep = int(round(len(first) * gold / 5.0))
            second = first[:keep] + _sentence(rng, c2)[keep:]
            rng.shuffle(second)
            rows.append((float(gold), " ".join(first), " ".join(second)))
    order = rng.permutation(len(rows))
    with open(path, "w", encoding="utf-8") as fh:
        for i in order:
            gold, s1, s2 = rows[i]
            fh.write(f"{gold}\t{s1}\t{s2}\n")
    return len(rows)
