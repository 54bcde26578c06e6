"""Annotated policy corpus: loading, annotator consolidation, binary datasets.

The corpus arrives as one tab-separated annotation file per policy
(``doc_id, annotator_id, segment_index, category, segment_text``). Multiple
annotators label the same segments; a label survives consolidation when at
least ``quorum`` distinct annotators assigned it. The default quorum of 2
out of 3 annotators is the usual "0.75 overlap" agreement setting quoted for
this corpus; it stays a parameter rather than a constant.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .validation import require


class CorpusError(Exception):
    """Raised for malformed corpus directories, files, or rows."""


class CategoryLabel(enum.Enum):
    """The ten broad data-practice categories a policy segment can carry."""

    FIRST_PARTY_COLLECTION_USE = "FirstPartyCollectionUse"
    THIRD_PARTY_SHARING_COLLECTION = "ThirdPartySharingCollection"
    USER_CHOICE_CONTROL = "UserChoiceControl"
    USER_ACCESS_EDIT_DELETION = "UserAccessEditDeletion"
    DATA_RETENTION = "DataRetention"
    DATA_SECURITY = "DataSecurity"
    POLICY_CHANGE = "PolicyChange"
    INTERNATIONAL_SPECIFIC_AUDIENCES = "InternationalSpecificAudiences"
    DO_NOT_TRACK = "DoNotTrack"
    OTHER = "Other"

    @classmethod
    def parse(cls, value: str) -> "CategoryLabel":
        try:
            return cls(value)
        except ValueError:
            raise CorpusError(f"unknown category string: {value!r}") from None

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class Segment:
    """A contiguous paragraph of policy (or law) text with provenance."""

    doc_id: str
    index: int
    text: str
    char_span: tuple[int, int]

    def __post_init__(self) -> None:
        require(self.index >= 0, "segment index must be non-negative")
        require(bool(self.text.strip()), "segment text is empty after trimming")
        start, end = self.char_span
        require(end > start, "char_span end must exceed start")


@dataclass(frozen=True)
class LabeledSegment:
    segment: Segment
    labels: frozenset[CategoryLabel]

    def __post_init__(self) -> None:
        require(len(self.labels) > 0, "labeled segment must carry at least one label")


@dataclass(frozen=True)
class RawLabelRecord:
    """One annotator's label for one segment, as read from an annotation file."""

    doc_id: str
    annotator_id: str
    segment_index: int
    category: CategoryLabel
    text: str


@dataclass(frozen=True)
class BinaryDataset:
    """One-vs-rest view of the corpus for a single category."""

    category: CategoryLabel
    examples: tuple[tuple[Segment, bool], ...]

    @property
    def positives(self) -> int:
        return sum(1 for _, y in self.examples if y)

    @property
    def negatives(self) -> int:
        return len(self.examples) - self.positives


def _decode_text(field: str) -> str:
    # Newlines inside segment text are encoded as the two characters "\n".
    return field.replace("\\n", "\n")


def _encode_text(text: str) -> str:
    return text.replace("\n", "\\n")


def load_opp115(root_path: str | Path) -> list[tuple[str, list[RawLabelRecord]]]:
    """Load per-policy annotation files from a corpus directory.

    Returns one ``(doc_id, records)`` group per policy, sorted by doc_id so the
    ingest order never depends on filesystem enumeration.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise CorpusError(f"corpus directory not found: {root}")
    files = sorted(root.glob("*.tsv"))
    if not files:
        raise CorpusError(f"no annotation files found under {root}")

    groups: dict[str, list[RawLabelRecord]] = defaultdict(list)
    for path in files:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 5:
                    raise CorpusError(
                        f"{path}:{lineno}: expected 5 tab-separated fields, got {len(parts)}"
                    )
                doc_id, annotator_id, index_str, category_str, text = parts
                try:
                    segment_index = int(index_str)
                except ValueError:
                    raise CorpusError(
                        f"{path}:{lineno}: segment index is not an integer: {index_str!r}"
                    ) from None
                try:
                    category = CategoryLabel.parse(category_str)
                except CorpusError as err:
                    raise CorpusError(f"{path}:{lineno}: {err}") from None
                groups[doc_id].append(
                    RawLabelRecord(doc_id, annotator_id, segment_index, category, _decode_text(text))
                )
    return [(doc_id, groups[doc_id]) for doc_id in sorted(groups)]


def write_annotations(path: str | Path, records: Iterable[RawLabelRecord]) -> None:
    """Write records for one policy in the internal annotation format."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                "\t".join(
                    [
                        rec.doc_id,
                        rec.annotator_id,
                        str(rec.segment_index),
                        rec.category.value,
                        _encode_text(rec.text),
                    ]
                )
                + "\n"
            )


def _flatten_records(records) -> list[RawLabelRecord]:
    flat: list[RawLabelRecord] = []
    for item in records:
        if isinstance(item, RawLabelRecord):
            flat.append(item)
        elif isinstance(item, LabeledSegment):
            # Consolidated output fed back in: treat it as a single annotator.
            for label in item.labels:
                flat.append(
                    RawLabelRecord(
                        item.segment.doc_id, "consolidated", item.segment.index, label, item.segment.text
                    )
                )
        elif isinstance(item, tuple) and len(item) == 2:
            flat.extend(item[1])
        else:
            raise TypeError(f"cannot consolidate records of type {type(item).__name__}")
    return flat


def consolidate(records, quorum: int = 2) -> list[LabeledSegment]:
    """Keep labels assigned by at least ``quorum`` distinct annotators.

    Segments left without any surviving label are dropped. Accepts the raw
    groups from :func:`load_opp115`, a flat record list, or previously
    consolidated segments (which behave as a single annotator).
    """
    require(quorum >= 1, "quorum must be at least 1")
    flat = _flatten_records(records)

    by_segment: dict[tuple[str, int], list[RawLabelRecord]] = defaultdict(list)
    for rec in flat:
        by_segment[(rec.doc_id, rec.segment_index)].append(rec)

    surviving: dict[str, list[tuple[int, str, frozenset[CategoryLabel]]]] = defaultdict(list)
    for (doc_id, index), recs in by_segment.items():
        annotators_per_label: dict[CategoryLabel, set[str]] = defaultdict(set)
        for rec in recs:
            annotators_per_label[rec.category].add(rec.annotator_id)
        labels = frozenset(
            label for label, annotators in annotators_per_label.items() if len(annotators) >= quorum
        )
        if not labels:
            continue
        text = min(recs, key=lambda r: r.annotator_id).text
        surviving[doc_id].append((index, text, labels))

    out: list[LabeledSegment] = []
    for doc_id in sorted(surviving):
        entries = sorted(surviving[doc_id], key=lambda e: e[0])
        # Spans index into the reconstructed document (segments joined by a
        # blank line), in UTF-8 byte offsets.
        offset = 0
        for pos, (index, text, labels) in enumerate(entries):
            if pos > 0:
                offset += len("\n\n".encode("utf-8"))
            nbytes = len(text.encode("utf-8"))
            seg = Segment(doc_id=doc_id, index=index, text=text, char_span=(offset, offset + nbytes))
            offset += nbytes
            out.append(LabeledSegment(segment=seg, labels=labels))
    return out


def to_binary_datasets(corpus: Sequence[LabeledSegment]) -> list[BinaryDataset]:
    """Split the corpus into one binary dataset per category.

    Every segment appears in all ten datasets; it is positive exactly in the
    datasets of its own labels.
    """
    require(len(corpus) > 0, "corpus is empty")
    datasets = []
    for category in CategoryLabel:
        examples = tuple((ls.segment, category in ls.labels) for ls in corpus)
        datasets.append(BinaryDataset(category=category, examples=examples))
    return datasets


def drop_do_not_track_only(corpus: Sequence[LabeledSegment]) -> list[LabeledSegment]:
    """Remove segments whose only surviving label is DoNotTrack.

    Those segments stay in the corpus for reporting but are excluded from
    classifier training by default.
    """
    dnt = frozenset({CategoryLabel.DO_NOT_TRACK})
    return [ls for ls in corpus if ls.labels != dnt]


def split(
    dataset: BinaryDataset, test_fraction: float = 0.2, seed: int = 0
) -> tuple[BinaryDataset, BinaryDataset]:
    """Deterministic stratified train/test split of one binary dataset."""
    require(0.0 < test_fraction < 1.0, "test_fraction must be in (0, 1)")
    pos_idx = [i for i, (_, y) in enumerate(dataset.examples) if y]
    neg_idx = [i for i, (_, y) in enumerate(dataset.examples) if not y]
    if len(pos_idx) < 2 or len(neg_idx) < 2:
        raise CorpusError(
            f"dataset for {dataset.category.value} is too small to stratify "
            f"({len(pos_idx)} positives, {len(neg_idx)} negatives)"
        )

    rng = np.random.RandomState(seed)

    def pick(indices: list[int]) -> tuple[set[int], set[int]]:
        shuffled = [indices[j] for j in rng.permutation(len(indices))]
        n_test = int(round(test_fraction * len(indices)))
        n_test = min(max(n_test, 1), len(indices) - 1)
        return set(shuffled[:n_test]), set(shuffled[n_test:])

    test_pos, train_pos = pick(pos_idx)
    test_neg, train_neg = pick(neg_idx)
    test_set = test_pos | test_neg
    train_set = train_pos | train_neg

    train = tuple(dataset.examples[i] for i in sorted(train_set))
    test = tuple(dataset.examples[i] for i in sorted(test_set))
    return (
        BinaryDataset(category=dataset.category, examples=train),
        BinaryDataset(category=dataset.category, examples=test),
    )
