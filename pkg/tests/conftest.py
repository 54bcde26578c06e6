"""Shared fixtures: generated corpus, trained models, embedding provider.

The heavyweight artifacts (115-policy corpus, trained classifiers, word
vectors) are built once per session and reused by the unit and acceptance
tests.
"""
from __future__ import annotations

import pytest

from lexcheck import classify, corpus, preprocess
from lexcheck.compliance import load_calibration
from lexcheck.datasets import make_policy_corpus, make_static_table, sample_policy_text
from lexcheck.lawmodel import load_requirements
from lexcheck.mapping import load_mapping
from lexcheck.preprocess import data_path
from lexcheck.similarity import StaticTableProvider, load_embeddings

ALTERED_RETENTION_SENTENCE = "Nestle will store the data for as long as we want"


@pytest.fixture(scope="session")
def corpus_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    make_policy_corpus(root, n_policies=115, seed=7)
    return root


@pytest.fixture(scope="session")
def consolidated(corpus_root):
    return corpus.consolidate(corpus.load_opp115(corpus_root))


@pytest.fixture(scope="session")
def trainable(consolidated):
    return corpus.drop_do_not_track_only(consolidated)


@pytest.fixture(scope="session")
def vectorizer(trainable):
    streams = [preprocess.normalize(preprocess.tokenize(ls.segment.text)) for ls in trainable]
    return preprocess.TfidfVectorizer().fit(streams)


@pytest.fixture(scope="session")
def binary_datasets(trainable):
    return {d.category: d for d in corpus.to_binary_datasets(trainable)}


@pytest.fixture(scope="session")
def trained_classifier(binary_datasets, vectorizer):
    models = {}
    for category, dataset in binary_datasets.items():
        if dataset.positives < 2 or dataset.negatives < 2:
            continue
        train_set, _ = corpus.split(dataset, test_fraction=0.2, seed=7)
        models[category] = classify.train_logreg(train_set, vectorizer, seed=7)
    return classify.MultiLabelClassifier(models=models, vectorizer=vectorizer)


@pytest.fixture(scope="session")
def static_table_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("vectors") / "vectors_50d.txt"
    extra = [sample_policy_text(), ALTERED_RETENTION_SENTENCE]
    for name in ("requirements_gdpr.json", "requirements_pdpa.json"):
        extra.extend(seg.text for seg in load_requirements(data_path(name)))
    make_static_table(path, extra_texts=extra)
    return path


@pytest.fixture(scope="session")
def provider(static_table_path):
    return StaticTableProvider(load_embeddings(static_table_path), provider_id="static:demo")


@pytest.fixture(scope="session")
def gdpr_requirements():
    return load_requirements(data_path("requirements_gdpr.json"))


@pytest.fixture(scope="session")
def gdpr_mapping():
    return load_mapping(data_path("mapping_gdpr.json"))


@pytest.fixture(scope="session")
def gdpr_calibration():
    return load_calibration(data_path("calibration_gdpr.json"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.fspath.basename == "test_acceptance.py":
        status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
        lines = getattr(item.config, "_acceptance_lines", None)
        if lines is None:
            lines = []
            item.config._acceptance_lines = lines
        lines.append(f"[{status}] {item.name}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
