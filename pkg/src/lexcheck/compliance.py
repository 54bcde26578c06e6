"""Calibrated compliance scoring and report assembly.

A calibration maps raw similarity onto [0, 1] with a clamped linear ramp
between its two anchor scores. Each requirement is scored by its best
policy/law segment pair (one fully compliant clause satisfies a disclosure
requirement); requirements no policy segment maps to score zero and are
surfaced as warnings rather than dropped.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import Segment
from .lawmodel import ConfigError, Law, RequirementCategory, RequirementSegment, requirements_law
from .mapping import MappingTable, requirements_for
from .preprocess import segment_text
from .similarity import Measure, SimilarityScore, score as similarity_score
from .validation import require


class Direction(enum.Enum):
    HIGHER_IS_COMPLIANT = "higher_is_compliant"
    LOWER_IS_COMPLIANT = "lower_is_compliant"

    @classmethod
    def parse(cls, value: str) -> "Direction":
        try:
            return cls(value.lower())
        except ValueError:
            raise ConfigError(f"unknown calibration direction: {value!r}") from None


@dataclass(frozen=True)
class Calibration:
    law: Law
    measure: Measure
    min_score: float
    max_score: float
    direction: Direction

    def __post_init__(self) -> None:
        require(self.min_score != self.max_score, "calibration anchors must differ", ConfigError)
        require(self.min_score < self.max_score, "min_score must be below max_score", ConfigError)


def load_calibration(path: str | Path) -> Calibration:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"calibration config not found: {p}")
    with open(p, encoding="utf-8") as fh:
        raw = json.load(fh)
    require(raw.get("version") == 1, f"unsupported calibration version: {raw.get('version')}", ConfigError)
    return Calibration(
        law=Law.parse(raw["law"]),
        measure=Measure.parse(raw["measure"]),
        min_score=float(raw["min_score"]),
        max_score=float(raw["max_score"]),
        direction=Direction.parse(raw["direction"]),
    )


def save_calibration(calib: Calibration, path: str | Path) -> None:
    payload = {
        "version": 1,
        "law": calib.law.value,
        "measure": calib.measure.value,
        "min_score": calib.min_score,
        "max_score": calib.max_score,
        "direction": calib.direction.value,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def normalize_score(score: float, calib: Calibration) -> float:
    """Clamped linear map of a raw similarity onto [0, 1].

    Higher-is-compliant ramps up from min_score to max_score; the opposite
    direction ramps down across the same anchors.
    """
    span = calib.max_score - calib.min_score
    if calib.direction is Direction.HIGHER_IS_COMPLIANT:
        value = (score - calib.min_score) / span
    else:
        value = (calib.max_score - score) / span
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class Evidence:
    policy_doc_id: str
    policy_index: int
    policy_text: str
    law_segment_id: str
    raw_score: float
    normalized_score: float
    zero_vector: bool


@dataclass(frozen=True)
class RequirementResult:
    requirement: RequirementCategory
    compliance: float
    evidence: tuple[Evidence, ...]


@dataclass(frozen=True)
class ComplianceReport:
    law: Law
    provider_id: str
    calibration: Calibration
    results: tuple[RequirementResult, ...]
    warnings: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "law": self.law.value,
            "provider": self.provider_id,
            "calibration": {
                "measure": self.calibration.measure.value,
                "min_score": self.calibration.min_score,
                "max_score": self.calibration.max_score,
                "direction": self.calibration.direction.value,
            },
            "requirements": [
                {
                    "requirement": r.requirement.value,
                    "compliance": r.compliance,
                    "evidence": [
                        {
                            "policy_doc_id": e.policy_doc_id,
                            "policy_index": e.policy_index,
                            "policy_text": e.policy_text,
                            "law_segment_id": e.law_segment_id,
                            "raw_score": e.raw_score,
                            "normalized_score": e.normalized_score,
                            "zero_vector": e.zero_vector,
                        }
                        for e in r.evidence
                    ],
                }
                for r in self.results
            ],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"Compliance report — {self.law.value}", ""]
        for r in self.results:
            lines.append(f"  {r.requirement.value:28s} {100.0 * r.compliance:6.1f}%")
            if r.evidence:
                best = r.evidence[0]
                lines.append(
                    f"    best match: policy segment {best.policy_index} ~ {best.law_segment_id}"
                    f" (raw {best.raw_score:.4f})"
                )
        if self.warnings:
            lines.append("")
            lines.append("Warnings:")
            for w in self.warnings:
                lines.append(f"  - {w}")
        return "\n".join(lines) + "\n"


def score_requirement(
    policy_segments: Sequence[Segment],
    law_segments: Sequence[RequirementSegment],
    provider,
    measure: Measure,
    calib: Calibration,
) -> tuple[float, tuple[Evidence, ...], tuple[str, ...]]:
    """Score one requirement from its mapped policy segments.

    Every (policy, law) pair is scored; the requirement's compliance is the
    best pair's normalized score. With no mapped policy segments the
    requirement scores 0.0 and a warning is emitted.
    """
    require(len(law_segments) > 0, "requirement has no law segments")
    requirement = law_segments[0].requirement
    if not policy_segments:
        return 0.0, (), (f"requirement unaddressed: {requirement.value}",)

    warnings = []
    evidence = []
    for policy_segment in policy_segments:
        policy_vec = provider.embed(policy_segment.text, key=f"policy:{policy_segment.doc_id}:{policy_segment.index}")
        if policy_vec.all_oov:
            warnings.append(
                f"zero vector for policy segment {policy_segment.doc_id}:{policy_segment.index}"
            )
        for law_segment in law_segments:
            law_vec = provider.embed(
                law_segment.text, key=f"law:{law_segment.requirement.law.value}:{law_segment.segment_id}"
            )
            if law_vec.all_oov:
                warnings.append(f"zero vector for law segment {law_segment.segment_id}")
            sim: SimilarityScore = similarity_score(policy_vec, law_vec, measure)
            evidence.append(
                Evidence(
                    policy_doc_id=policy_segment.doc_id,
                    policy_index=policy_segment.index,
                    policy_text=policy_segment.text,
                    law_segment_id=law_segment.segment_id,
                    raw_score=sim.value,
                    normalized_score=normalize_score(sim.value, calib),
                    zero_vector=sim.zero_vector,
                )
            )
    # Best evidence first; ties broken deterministically by provenance.
    evidence.sort(key=lambda e: (-e.normalized_score, e.policy_index, e.law_segment_id))
    compliance = evidence[0].normalized_score
    # De-duplicate warnings while preserving order.
    seen = set()
    unique_warnings = tuple(w for w in warnings if not (w in seen or seen.add(w)))
    return compliance, tuple(evidence), unique_warnings


def build_report(
    policy_doc: str,
    labeler,
    mapping_table: MappingTable,
    requirement_segments: Sequence[RequirementSegment],
    provider,
    calibration: Calibration,
    doc_id: str = "policy",
) -> ComplianceReport:
    """Segment, classify, map, and score a policy document against one law."""
    law = mapping_table.law
    require(requirements_law(requirement_segments) == law, "mapping and requirement configs disagree on the law", ConfigError)
    require(calibration.law == law, "calibration does not match the law", ConfigError)

    segments = segment_text(policy_doc, doc_id=doc_id)
    warnings: list[str] = []
    if not segments:
        warnings.append("policy document is empty")

    by_requirement: dict[RequirementCategory, list[Segment]] = {
        requirement: [] for requirement in RequirementCategory.for_law(law)
    }
    for segment in segments:
        labels = labeler.labels_for(segment)
        if not labels:
            warnings.append(f"segment {segment.doc_id}:{segment.index} has no labels")
            continue
        mapped = requirements_for(mapping_table, labels)
        if not mapped:
            warnings.append(
                f"segment {segment.doc_id}:{segment.index} maps to no requirement "
                f"(labels: {', '.join(sorted(l.value for l in labels))})"
            )
            continue
        for requirement in mapped:
            by_requirement[requirement].append(segment)

    law_by_requirement: dict[RequirementCategory, list[RequirementSegment]] = {}
    for seg in requirement_segments:
        law_by_requirement.setdefault(seg.requirement, []).append(seg)

    results = []
    for requirement in RequirementCategory.for_law(law):
        compliance, evidence, req_warnings = score_requirement(
            by_requirement[requirement],
            law_by_requirement[requirement],
            provider,
            calibration.measure,
            calibration,
        )
        warnings.extend(req_warnings)
        results.append(
            RequirementResult(requirement=requirement, compliance=compliance, evidence=evidence)
        )

    seen = set()
    unique_warnings = tuple(w for w in warnings if not (w in seen or seen.add(w)))
    return ComplianceReport(
        law=law,
        provider_id=getattr(provider, "provider_id", "unknown"),
        calibration=calibration,
        results=tuple(results),
        warnings=unique_warnings,
    )


@dataclass(frozen=True)
class CalibrationExample:
    law_segment_id: str
    gold: int
    policy_text: str

    def __post_init__(self) -> None:
        require(0 <= self.gold <= 5, "gold grade must be in 0..5")


def load_calibration_examples(path: str | Path) -> list[CalibrationExample]:
    """Read calibration examples: law_segment_id TAB gold TAB policy_text."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
            out.append(
                CalibrationExample(law_segment_id=parts[0], gold=int(parts[1]), policy_text=parts[2])
            )
    return out


def calibrate(
    examples: Sequence[CalibrationExample],
    requirement_segments: Sequence[RequirementSegment],
    provider,
    measure: Measure,
    direction: Direction,
) -> Calibration:
    """Fit calibration anchors from graded examples.

    The fully-compliant anchor is the mean raw score of gold-5 examples, the
    non-compliant anchor the mean over gold 0/1; the smaller mean becomes
    min_score so the ramp is always well ordered.
    """
    law = requirements_law(requirement_segments)
    by_id = {seg.segment_id: seg for seg in requirement_segments}

    def raw_score(example: CalibrationExample) -> float:
        seg = by_id.get(example.law_segment_id)
        require(seg is not None, f"unknown law segment id: {example.law_segment_id}", ConfigError)
        a = provider.embed(example.policy_text)
        b = provider.embed(seg.text, key=f"law:{law.value}:{seg.segment_id}")
        return similarity_score(a, b, measure).value

    compliant = [raw_score(e) for e in examples if e.gold == 5]
    noncompliant = [raw_score(e) for e in examples if e.gold <= 1]
    require(len(compliant) > 0, "calibration needs at least one gold-5 example")
    require(len(noncompliant) > 0, "calibration needs at least one gold-0 or gold-1 example")
    anchor_hi = sum(compliant) / len(compliant)
    anchor_lo = sum(noncompliant) / len(noncompliant)
    require(anchor_hi != anchor_lo, "calibration anchors coincide; add more distinctive examples")
    return Calibration(
        law=law,
        measure=measure,
        min_score=min(anchor_hi, anchor_lo),
        max_score=max(anchor_hi, anchor_lo),
        direction=direction,
    )
