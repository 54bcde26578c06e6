"""Command-line entry point.

Subcommands: ``train`` (fit the per-category classifiers), ``label-law``
(segment a statute and emit the topic-model selection reports), ``check``
(produce a compliance report for a policy), ``eval-sts`` (similarity
benchmark), ``calibrate`` (fit compliance thresholds from graded examples).

Exit codes: 0 success, 1 internal error, 2 usage or input error. The
``LEXCHECK_DATA_DIR`` environment variable overrides the bundled config
directory.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import classify, compliance, corpus, lawmodel, mapping, preprocess, similarity
from .lawmodel import ConfigError, Law, LawParseError

USAGE_ERROR = 2
INTERNAL_ERROR = 1


class CliError(Exception):
    """Input or usage problem; reported on stderr with exit code 2."""


def data_dir() -> Path:
    override = os.environ.get("LEXCHECK_DATA_DIR")
    if override:
        return Path(override)
    return preprocess.data_path("stopwords.txt").parent


def _default_config(name: str, explicit: str | None) -> Path:
    if explicit:
        path = Path(explicit)
    else:
        path = data_dir() / name
    if not path.is_file():
        raise CliError(f"config file not found: {path}")
    return path


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"input file not found: {p}")
    return p.read_text(encoding="utf-8")


def _write(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(content, encoding="utf-8")


def cmd_train(args: argparse.Namespace) -> int:
    try:
        groups = corpus.load_opp115(args.corpus)
    except corpus.CorpusError as err:
        raise CliError(str(err)) from None
    consolidated = corpus.consolidate(groups, quorum=args.quorum)
    if not args.include_do_not_track:
        trainable = corpus.drop_do_not_track_only(consolidated)
    else:
        trainable = consolidated
    if not trainable:
        raise CliError("consolidation produced no labeled segments")

    apply_normalize = not args.no_normalize
    token_streams = []
    for ls in trainable:
        tokens = preprocess.tokenize(ls.segment.text)
        if apply_normalize:
            tokens = preprocess.normalize(tokens)
        token_streams.append(tokens)
    vectorizer = preprocess.TfidfVectorizer(min_df=args.min_df, max_vocab=args.max_vocab).fit(token_streams)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    vectorizer.save(out_dir / "vectorizer.json")

    metrics_lines = ["kind\tcategory\tprecision\trecall\tf1\ttp\tfp\tfn\ttn"]
    for dataset in corpus.to_binary_datasets(trainable):
        if dataset.positives < 2 or dataset.negatives < 2:
            print(f"skipping {dataset.category.value}: too few examples to stratify", file=sys.stderr)
            continue
        train_set, test_set = corpus.split(dataset, test_fraction=args.test_fraction, seed=args.seed)
        for kind, trainer in (("logreg", classify.train_logreg), ("svm", classify.train_svm)):
            model = trainer(train_set, vectorizer, seed=args.seed, apply_normalize=apply_normalize)
            classify.save_model(model, out_dir / f"{kind}_{dataset.category.value}.json")
            m = classify.evaluate(model, test_set, vectorizer, apply_normalize=apply_normalize)
            metrics_lines.append(
                f"{kind}\t{dataset.category.value}\t{m.precision:.6f}\t{m.recall:.6f}\t{m.f1:.6f}"
                f"\t{m.tp}\t{m.fp}\t{m.fn}\t{m.tn}"
            )
    (out_dir / "metrics.tsv").write_text("\n".join(metrics_lines) + "\n", encoding="utf-8")
    print(f"wrote models and metrics to {out_dir}")
    return 0


def cmd_label_law(args: argparse.Namespace) -> int:
    text = _read_text(args.law_text)
    if not text.strip():
        raise CliError(f"law text is empty: {args.law_text}")
    try:
        segments = lawmodel.parse_gdpr(text)
    except LawParseError as err:
        raise CliError(str(err)) from None

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    seg_lines = ["article_id\tchapter\tsection\twords\ttext"]
    for seg in segments:
        seg_lines.append(
            "\t".join(
                [
                    seg.article_id,
                    seg.chapter or "",
                    seg.section or "",
                    str(seg.word_count()),
                    seg.text.replace("\n", "\\n"),
                ]
            )
        )
    (out_dir / "segments.tsv").write_text("\n".join(seg_lines) + "\n", encoding="utf-8")

    docs = [preprocess.normalize(preprocess.tokenize(seg.text)) for seg in segments]
    docs = [d for d in docs if d]
    k_grid = [int(k) for k in args.k_grid.split(",") if k.strip()]
    report = lawmodel.select_k(
        docs, k_grid=k_grid, seeds=[args.seed], iterations=args.iterations
    )
    (out_dir / "model_selection.tsv").write_text(report.to_tsv(), encoding="utf-8")

    best_k = k_grid[0] if len(k_grid) == 1 else args.k
    model = lawmodel.lda_fit(docs, k=best_k, iterations=args.iterations, seed=args.seed)
    (out_dir / "top_words.tsv").write_text(lawmodel.top_words_tsv(model), encoding="utf-8")
    print(f"wrote {len(segments)} segments and model selection reports to {out_dir}")
    return 0


def _load_labeler(args: argparse.Namespace):
    if args.predictions:
        path = Path(args.predictions)
        if not path.is_file():
            raise CliError(f"predictions file not found: {path}")
        return classify.load_predictions(path)
    if not args.models:
        raise CliError("check needs --models <dir> or --predictions <file>")
    models_dir = Path(args.models)
    if not models_dir.is_dir():
        raise CliError(f"models directory not found: {models_dir}")
    vec_path = models_dir / "vectorizer.json"
    if not vec_path.is_file():
        raise CliError(f"vectorizer file not found: {vec_path}")
    vectorizer = preprocess.TfidfVectorizer.load(vec_path)
    vec_hash = vectorizer.content_hash()
    models = {}
    for path in sorted(models_dir.glob(f"{args.model_kind}_*.json")):
        model = classify.load_model(path)
        if model.vectorizer_hash and model.vectorizer_hash != vec_hash:
            raise CliError(f"{path.name} was trained with a different vectorizer than {vec_path}")
        models[model.category] = model
    if not models:
        raise CliError(f"no {args.model_kind} model files under {models_dir}")
    return classify.MultiLabelClassifier(models=models, vectorizer=vectorizer)


def cmd_check(args: argparse.Namespace) -> int:
    policy_text = _read_text(args.policy)
    law = Law.parse(args.law)
    suffix = law.value.lower()
    requirement_segments = lawmodel.load_requirements(
        _default_config(f"requirements_{suffix}.json", args.requirements)
    )
    mapping_table = mapping.load_mapping(_default_config(f"mapping_{suffix}.json", args.mapping))
    calibration = compliance.load_calibration(
        _default_config(f"calibration_{suffix}.json", args.calibration)
    )
    if args.measure:
        import dataclasses

        calibration = dataclasses.replace(calibration, measure=similarity.Measure.parse(args.measure))
    if not args.provider:
        raise CliError("check needs --provider static:<path> or precomputed:<path>")
    try:
        provider = similarity.get_provider(args.provider)
    except (OSError, ValueError) as err:
        raise CliError(f"cannot load provider {args.provider!r}: {err}") from None
    labeler = _load_labeler(args)

    report = compliance.build_report(
        policy_doc=policy_text,
        labeler=labeler,
        mapping_table=mapping_table,
        requirement_segments=requirement_segments,
        provider=provider,
        calibration=calibration,
        doc_id=Path(args.policy).stem,
    )
    content = report.to_json() if args.format == "json" else report.to_text()
    _write(args.out, content)
    return 0


def cmd_eval_sts(args: argparse.Namespace) -> int:
    if not Path(args.sts).is_file():
        raise CliError(f"similarity pairs file not found: {args.sts}")
    try:
        provider = similarity.get_provider(args.provider)
    except (OSError, ValueError) as err:
        raise CliError(f"cannot load provider {args.provider!r}: {err}") from None
    try:
        result = similarity.sts_eval(args.sts, provider)
    except ValueError as err:
        raise CliError(str(err)) from None
    print(f"pearson\t{result.pearson:.6f}")
    print(f"n\t{result.n}")
    print(f"skipped\t{result.skipped}")
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    law = Law.parse(args.law)
    suffix = law.value.lower()
    requirement_segments = lawmodel.load_requirements(
        _default_config(f"requirements_{suffix}.json", args.requirements)
    )
    examples = compliance.load_calibration_examples(Path(args.examples))
    try:
        provider = similarity.get_provider(args.provider)
    except (OSError, ValueError) as err:
        raise CliError(f"cannot load provider {args.provider!r}: {err}") from None
    try:
        calib = compliance.calibrate(
            examples,
            requirement_segments,
            provider,
            measure=similarity.Measure.parse(args.measure),
            direction=compliance.Direction.parse(args.direction),
        )
    except ValueError as err:
        raise CliError(str(err)) from None
    if args.out:
        compliance.save_calibration(calib, args.out)
        print(f"wrote calibration to {args.out}")
    else:
        print(json.dumps({"min_score": calib.min_score, "max_score": calib.max_score}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexcheck", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train per-category classifiers from an annotated corpus")
    p_train.add_argument("--corpus", required=True, help="directory of per-policy annotation files")
    p_train.add_argument("--out", required=True, help="output directory for models and metrics")
    p_train.add_argument("--seed", type=int, default=7)
    p_train.add_argument("--quorum", type=int, default=2)
    p_train.add_argument("--test-fraction", type=float, default=0.2)
    p_train.add_argument("--min-df", type=int, default=2)
    p_train.add_argument("--max-vocab", type=int, default=10000)
    p_train.add_argument("--include-do-not-track", action="store_true")
    p_train.add_argument("--no-normalize", action="store_true", help="skip stopword removal and stemming")
    p_train.set_defaults(func=cmd_train)

    p_label = sub.add_parser("label-law", help="segment a statute and report topic-model diagnostics")
    p_label.add_argument("--law-text", required=True)
    p_label.add_argument("--out", required=True)
    p_label.add_argument("--k-grid", default="5,10,15")
    p_label.add_argument("--k", type=int, default=10, help="topic count for the top-words dump")
    p_label.add_argument("--iterations", type=int, default=200)
    p_label.add_argument("--seed", type=int, default=7)
    p_label.set_defaults(func=cmd_label_law)

    p_check = sub.add_parser("check", help="score a policy against a law and write the report")
    p_check.add_argument("--policy", required=True)
    p_check.add_argument("--law", choices=["gdpr", "pdpa"], required=True)
    p_check.add_argument("--provider", help="static:<path> or precomputed:<path>")
    p_check.add_argument("--measure", choices=["cosine", "euclidean"], default=None,
                         help="override the calibration's measure (rarely needed)")
    p_check.add_argument("--models", help="directory produced by `lexcheck train`")
    p_check.add_argument("--model-kind", choices=["logreg", "svm"], default="logreg")
    p_check.add_argument("--predictions", help="side-loaded per-segment labels (tsv)")
    p_check.add_argument("--mapping", help="mapping config path (default: bundled)")
    p_check.add_argument("--requirements", help="requirement config path (default: bundled)")
    p_check.add_argument("--calibration", help="calibration config path (default: bundled)")
    p_check.add_argument("--format", choices=["json", "text"], default="json")
    p_check.add_argument("--out", help="output path (default: stdout)")
    p_check.set_defaults(func=cmd_check)

    p_sts = sub.add_parser("eval-sts", help="Pearson correlation on a sentence-pair benchmark")
    p_sts.add_argument("--sts", required=True, help="tsv of gold, sentence1, sentence2")
    p_sts.add_argument("--provider", required=True)
    p_sts.set_defaults(func=cmd_eval_sts)

    p_cal = sub.add_parser("calibrate", help="fit compliance thresholds from graded examples")
    p_cal.add_argument("--examples", required=True, help="tsv of law_segment_id, gold, policy_text")
    p_cal.add_argument("--law", choices=["gdpr", "pdpa"], required=True)
    p_cal.add_argument("--provider", required=True)
    p_cal.add_argument("--measure", choices=["cosine", "euclidean"], default="cosine")
    p_cal.add_argument("--direction", choices=["higher_is_compliant", "lower_is_compliant"],
                       default="higher_is_compliant")
    p_cal.add_argument("--requirements", help="requirement config path (default: bundled)")
    p_cal.add_argument("--out", help="where to write the calibration JSON")
    p_cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except (ConfigError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as err:  # pragma: no cover - defensive
        print(f"internal error: {err}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
