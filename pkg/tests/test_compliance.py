"""Calibrated scoring and report assembly."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexcheck.compliance import (
    Calibration,
    CalibrationExample,
    Direction,
    build_report,
    calibrate,
    load_calibration,
    load_calibration_examples,
    normalize_score,
    save_calibration,
    score_requirement,
)
from lexcheck.corpus import CategoryLabel, Segment
from lexcheck.lawmodel import Law, RequirementCategory, RequirementSegment
from lexcheck.preprocess import data_path
from lexcheck.similarity import Measure, SentenceVector


GDPR_CALIB = Calibration(
    law=Law.GDPR,
    measure=Measure.COSINE,
    min_score=0.25,
    max_score=0.6,
    direction=Direction.HIGHER_IS_COMPLIANT,
)


class StubProvider:
    """Provider returning fixed vectors per text, for controlled cosines."""

    def __init__(self, vectors: dict[str, np.ndarray]):
        self.vectors = vectors
        self.provider_id = "stub"

    def embed(self, text: str, key: str | None = None) -> SentenceVector:
        if text in self.vectors:
            return SentenceVector(values=np.asarray(self.vectors[text], dtype=float), provider_id="stub")
        return SentenceVector(values=np.zeros(4), provider_id="stub", all_oov=True)


class TestNormalizeScore:
    def test_gdpr_endpoints(self):
        assert normalize_score(0.6, GDPR_CALIB) == pytest.approx(1.0, abs=1e-12)
        assert normalize_score(0.25, GDPR_CALIB) == pytest.approx(0.0, abs=1e-12)

    def test_linear_midpoint(self):
        assert normalize_score(0.425, GDPR_CALIB) == pytest.approx(0.5, abs=1e-12)

    def test_clamping(self):
        assert normalize_score(0.9, GDPR_CALIB) == 1.0
        assert normalize_score(-0.3, GDPR_CALIB) == 0.0

    def test_lower_is_compliant_ramp(self):
        calib = Calibration(
            law=Law.PDPA,
            measure=Measure.COSINE,
            min_score=0.09,
            max_score=0.5,
            direction=Direction.LOWER_IS_COMPLIANT,
        )
        assert normalize_score(0.09, calib) == pytest.approx(1.0, abs=1e-12)
        assert normalize_score(0.5, calib) == pytest.approx(0.0, abs=1e-12)

    @given(st.floats(min_value=-2, max_value=2), st.floats(min_value=-2, max_value=2))
    @settings(max_examples=100)
    def test_monotone_in_both_directions(self, a, b):
        lo, hi = min(a, b), max(a, b)
        up = Calibration(Law.GDPR, Measure.COSINE, 0.2, 0.7, Direction.HIGHER_IS_COMPLIANT)
        down = Calibration(Law.GDPR, Measure.COSINE, 0.2, 0.7, Direction.LOWER_IS_COMPLIANT)
        assert normalize_score(lo, up) <= normalize_score(hi, up)
        assert normalize_score(lo, down) >= normalize_score(hi, down)

    def test_coincident_anchors_rejected(self):
        with pytest.raises(Exception, match="anchors"):
            Calibration(Law.GDPR, Measure.COSINE, 0.5, 0.5, Direction.HIGHER_IS_COMPLIANT)


def law_seg(seg_id, requirement=RequirementCategory.GDPR3, text=None):
    return RequirementSegment(
        requirement=requirement, segment_id=seg_id, article_refs=(), text=text or f"law text {seg_id}"
    )


def policy_seg(index, text):
    return Segment("pol", index, text, (index * 100, index * 100 + len(text)))


class TestScoreRequirement:
    def test_unaddressed_requirement_scores_zero_with_warning(self):
        law_segments = [law_seg("l1")]
        compliance, evidence, warnings = score_requirement(
            [], law_segments, StubProvider({}), Measure.COSINE, GDPR_CALIB
        )
        assert compliance == 0.0
        assert evidence == ()
        assert warnings == ("requirement unaddressed: GDPR3",)

    def test_pair_at_max_score_is_fully_compliant(self):
        vectors = {"policy text": np.array([1.0, 0.0]), "law text": None}
        c = 0.6
        vectors["law text"] = np.array([c, math.sqrt(1 - c * c)])
        compliance, evidence, _ = score_requirement(
            [policy_seg(0, "policy text")],
            [law_seg("l1", text="law text")],
            StubProvider(vectors),
            Measure.COSINE,
            GDPR_CALIB,
        )
        assert compliance == pytest.approx(1.0, abs=1e-9)
        assert evidence[0].raw_score == pytest.approx(0.6, abs=1e-9)

    def test_best_pair_wins_over_two_by_two_grid(self):
        # Unit vectors chosen so the four pairwise cosines are exactly
        # {p1l1: 0.3, p1l2: 0.5, p2l1: 0.41, p2l2: 0.2}.
        z1 = math.sqrt(1 - 0.3**2 - 0.41**2)
        z2 = math.sqrt(1 - 0.5**2 - 0.2**2)
        vectors = {
            "p one": np.array([1.0, 0.0, 0.0, 0.0]),
            "p two": np.array([0.0, 1.0, 0.0, 0.0]),
            "l one": np.array([0.3, 0.41, z1, 0.0]),
            "l two": np.array([0.5, 0.2, 0.0, z2]),
        }
        compliance, evidence, _ = score_requirement(
            [policy_seg(0, "p one"), policy_seg(1, "p two")],
            [law_seg("l1", text="l one"), law_seg("l2", text="l two")],
            StubProvider(vectors),
            Measure.COSINE,
            GDPR_CALIB,
        )
        assert len(evidence) == 4
        assert evidence[0].raw_score == pytest.approx(0.5, abs=1e-9)
        assert compliance == pytest.approx((0.5 - 0.25) / 0.35, abs=1e-9)
        assert compliance == pytest.approx(0.714, abs=1e-3)

    def test_zero_vector_policy_segment_warns(self):
        compliance, evidence, warnings = score_requirement(
            [policy_seg(0, "unknown words only")],
            [law_seg("l1", text="law text")],
            StubProvider({"law text": np.array([1.0, 0.0, 0.0, 0.0])}),
            Measure.COSINE,
            GDPR_CALIB,
        )
        assert any("zero vector" in w for w in warnings)
        assert compliance == 0.0

    def test_removing_best_segment_never_increases_compliance(self):
        z1 = math.sqrt(1 - 0.55**2)
        z2 = math.sqrt(1 - 0.35**2)
        vectors = {
            "best": np.array([1.0, 0.0, 0.0]),
            "worse": np.array([0.0, 1.0, 0.0]),
            "law": np.array([0.55, 0.35, math.sqrt(1 - 0.55**2 - 0.35**2)]),
        }
        full, _, _ = score_requirement(
            [policy_seg(0, "best"), policy_seg(1, "worse")],
            [law_seg("l", text="law")],
            StubProvider(vectors),
            Measure.COSINE,
            GDPR_CALIB,
        )
        reduced, _, _ = score_requirement(
            [policy_seg(1, "worse")],
            [law_seg("l", text="law")],
            StubProvider(vectors),
            Measure.COSINE,
            GDPR_CALIB,
        )
        assert reduced <= full


class FixedLabeler:
    def __init__(self, labels_by_index):
        self.labels_by_index = labels_by_index

    def labels_for(self, segment):
        return self.labels_by_index.get(segment.index, set())


class TestBuildReport:
    def test_empty_policy_reports_all_requirements_zero(
        self, gdpr_mapping, gdpr_requirements, gdpr_calibration
    ):
        report = build_report(
            "", FixedLabeler({}), gdpr_mapping, gdpr_requirements, StubProvider({}), gdpr_calibration
        )
        assert len(report.results) == 4
        assert all(r.compliance == 0.0 for r in report.results)
        assert any("empty" in w for w in report.warnings)
        assert any("unaddressed" in w for w in report.warnings)

    def test_every_requirement_appears_exactly_once(
        self, gdpr_mapping, gdpr_requirements, gdpr_calibration, provider
    ):
        from lexcheck.datasets import sample_policy_text

        labeler = FixedLabeler(
            {
                1: {CategoryLabel.FIRST_PARTY_COLLECTION_USE},
                5: {CategoryLabel.USER_ACCESS_EDIT_DELETION},
                6: {CategoryLabel.DATA_RETENTION},
                7: {CategoryLabel.DATA_SECURITY},
            }
        )
        report = build_report(
            sample_policy_text(), labeler, gdpr_mapping, gdpr_requirements, provider, gdpr_calibration
        )
        names = [r.requirement for r in report.results]
        assert names == RequirementCategory.for_law(Law.GDPR)

    def test_report_invariant_to_segment_order(
        self, gdpr_mapping, gdpr_requirements, gdpr_calibration, provider
    ):
        paras = [
            "We collect your name and email address when you register for the service.",
            "We retain personal data only for the period necessary for the purposes described.",
            "You may request access to and correction of your personal data at any time.",
        ]
        labels = [
            {CategoryLabel.FIRST_PARTY_COLLECTION_USE},
            {CategoryLabel.DATA_RETENTION},
            {CategoryLabel.USER_ACCESS_EDIT_DELETION},
        ]
        doc_a = "\n\n".join(paras)
        doc_b = "\n\n".join(reversed(paras))
        report_a = build_report(
            doc_a, FixedLabeler(dict(enumerate(labels))), gdpr_mapping, gdpr_requirements,
            provider, gdpr_calibration,
        )
        report_b = build_report(
            doc_b, FixedLabeler(dict(enumerate(reversed(labels)))), gdpr_mapping, gdpr_requirements,
            provider, gdpr_calibration,
        )
        scores_a = {r.requirement: r.compliance for r in report_a.results}
        scores_b = {r.requirement: r.compliance for r in report_b.results}
        assert scores_a == scores_b

    def test_deterministic_for_fixed_inputs(
        self, gdpr_mapping, gdpr_requirements, gdpr_calibration, provider
    ):
        from lexcheck.datasets import sample_policy_text

        labeler = FixedLabeler({6: {CategoryLabel.DATA_RETENTION}})
        r1 = build_report(sample_policy_text(), labeler, gdpr_mapping, gdpr_requirements, provider, gdpr_calibration)
        r2 = build_report(sample_policy_text(), labeler, gdpr_mapping, gdpr_requirements, provider, gdpr_calibration)
        assert r1.to_json() == r2.to_json()

    def test_unmapped_segment_warning(self, gdpr_mapping, gdpr_requirements, gdpr_calibration):
        report = build_report(
            "Some paragraph about tracking signals.",
            FixedLabeler({0: {CategoryLabel.DO_NOT_TRACK}}),
            gdpr_mapping,
            gdpr_requirements,
            StubProvider({}),
            gdpr_calibration,
        )
        assert any("maps to no requirement" in w for w in report.warnings)

    def test_json_and_text_renderings(self, gdpr_mapping, gdpr_requirements, gdpr_calibration, provider):
        from lexcheck.datasets import sample_policy_text
        import json as jsonlib

        labeler = FixedLabeler({6: {CategoryLabel.DATA_RETENTION}})
        report = build_report(sample_policy_text(), labeler, gdpr_mapping, gdpr_requirements, provider, gdpr_calibration)
        payload = jsonlib.loads(report.to_json())
        assert payload["version"] == 1
        assert payload["law"] == "GDPR"
        assert len(payload["requirements"]) == 4
        text = report.to_text()
        assert "GDPR3" in text and "%" in text


class TestCalibrate:
    def _requirements(self):
        return [law_seg("anchor", text="anchor law")]

    def _provider_with_cosines(self, cosines):
        # One law vector; each example text pinned to an exact cosine with it.
        vectors = {"anchor law": np.array([1.0, 0.0])}
        for name, c in cosines.items():
            vectors[name] = np.array([c, math.sqrt(1 - c * c)])
        return StubProvider(vectors)

    def test_anchor_means_reproduce_shipped_thresholds(self):
        provider = self._provider_with_cosines(
            {"hi one": 0.58, "hi two": 0.62, "lo one": 0.24, "lo two": 0.26}
        )
        examples = [
            CalibrationExample("anchor", 5, "hi one"),
            CalibrationExample("anchor", 5, "hi two"),
            CalibrationExample("anchor", 0, "lo one"),
            CalibrationExample("anchor", 0, "lo two"),
        ]
        calib = calibrate(examples, self._requirements(), provider, Measure.COSINE, Direction.HIGHER_IS_COMPLIANT)
        assert calib.max_score == pytest.approx(0.6, abs=1e-9)
        assert calib.min_score == pytest.approx(0.25, abs=1e-9)

    def test_missing_anchor_grades_rejected(self):
        provider = self._provider_with_cosines({"mid": 0.4})
        examples = [CalibrationExample("anchor", 3, "mid")]
        with pytest.raises(ValueError, match="gold-5"):
            calibrate(examples, self._requirements(), provider, Measure.COSINE, Direction.HIGHER_IS_COMPLIANT)

    def test_shipped_gdpr_calibration_values(self):
        calib = load_calibration(data_path("calibration_gdpr.json"))
        assert calib.min_score == 0.25
        assert calib.max_score == 0.6
        assert calib.direction is Direction.HIGHER_IS_COMPLIANT
        assert calib.measure is Measure.COSINE

    def test_shipped_pdpa_calibration_values(self):
        calib = load_calibration(data_path("calibration_pdpa.json"))
        assert calib.min_score == 0.09
        assert calib.max_score == 0.5
        assert calib.direction is Direction.LOWER_IS_COMPLIANT

    def test_save_load_round_trip(self, tmp_path):
        save_calibration(GDPR_CALIB, tmp_path / "c.json")
        loaded = load_calibration(tmp_path / "c.json")
        assert loaded == GDPR_CALIB

    def test_examples_file_round_trip(self, tmp_path):
        path = tmp_path / "examples.tsv"
        path.write_text("seg1\t5\tfully compliant text\nseg2\t0\tirrelevant text\n", encoding="utf-8")
        examples = load_calibration_examples(path)
        assert examples[0] == CalibrationExample("seg1", 5, "fully compliant text")
        assert examples[1].gold == 0
