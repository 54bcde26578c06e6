"""Write the full demo data bundle: ``python -m lexcheck.datasets <outdir>``.

Produces an annotated policy corpus, a regulation fixture, a static
word-vector table, a sentence-pair benchmark file, and a copy of the sample
policy, so the CLI can be exercised without any external datasets.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..lawmodel import load_requirements
from ..preprocess import data_path
from .embeddings import make_static_table
from .laws import make_regulation_text
from .policies import make_policy_corpus, sample_policy_text
from .sts import make_sts_file


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="python -m lexcheck.datasets", description=__doc__)
    parser.add_argument("outdir", help="directory to write the demo bundle into")
    parser.add_argument("--policies", type=int, default=115)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    corpus_dir = out / "corpus"
    paths = make_policy_corpus(corpus_dir, n_policies=args.policies, seed=args.seed)
    print(f"wrote {len(paths)} annotated policies to {corpus_dir}")

    law_path = out / "regulation.txt"
    law_path.write_text(make_regulation_text(seed=args.seed), encoding="utf-8")
    print(f"wrote regulation fixture to {law_path}")

    extra = [sample_policy_text()]
    for name in ("requirements_gdpr.json", "requirements_pdpa.json"):
        extra.extend(seg.text for seg in load_requirements(data_path(name)))
    table_path = out / "vectors_50d.txt"
    n = make_static_table(table_path, extra_texts=extra)
    print(f"wrote {n} word vectors to {table_path}")

    sts_path = out / "sts_dev.tsv"
    n_pairs = make_sts_file(sts_path)
    print(f"wrote {n_pairs} sentence pairs to {sts_path}")

    policy_path = out / "sample_policy.txt"
    policy_path.write_text(sample_policy_text(), encoding="utf-8")
    print(f"wrote sample policy to {policy_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
