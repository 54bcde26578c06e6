"""Deterministic synthetic data generators for demos and tests.

The real annotated policy corpus, statute texts, word-vector files, and
similarity benchmarks are licensed external datasets that are not shipped
with the package. These generators produce structurally faithful stand-ins
from a shared privacy-domain lexicon, so every pipeline stage can be
exercised end to end with nothing but this repository.
"""
from .lexicon import CATEGORY_MIX, CLUSTERS, FILLER_WORDS, FUNCTION_WORDS
from .embeddings import make_static_table
from .policies import make_policy_corpus, sample_policy_text
from .laws import make_regulation_text, make_two_vocabulary_corpus
from .sts import make_sts_file

__all__ = [
    "CATEGORY_MIX",
    "CLUSTERS",
    "FILLER_WORDS",
    "FUNCTION_WORDS",
    "make_static_table",
    "make_policy_corpus",
    "sample_policy_text",
    "make_regulation_text",
    "make_two_vocabulary_corpus",
    "make_sts_file",
]
