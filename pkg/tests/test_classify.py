from __future__ import annotations

from core.classify import classify
from core.models import LawReport, SuiteReport
from core.semilattice import chain


class TestClassify:
    def test_square_is_boolean(self, sq):
        c = classify(sq)
        assert c.distributive and c.boolean and c.atomistic
        assert not c.lattice_simple
        assert c.distributivity_witness is None

    def test_diamond(self, m3):
        c = classify(m3)
        assert not c.distributive
        assert not c.boolean
        assert c.atomistic
        assert c.lattice_simple
        assert c.distributivity_witness is not None
        assert c.join_irreducibles == [1, 2, 3]

    def test_chains(self):
        assert classify(chain(2)).boolean
        assert classify(chain(2)).lattice_simple
        c3 = classify(chain(3))
        assert c3.distributive and not c3.boolean and not c3.atomistic

    def test_to_dict(self, n5):
        d = classify(n5).to_dict()
        assert d["size"] == 5
        assert d["meet_irreducibles"] == [1, 2, 3]
        assert set(d) >= {"distributive", "boolean", "atomistic", "lattice_simple"}


class TestLawReport:
    def test_check_counts_cases(self):
        report = LawReport("demo")
        assert report.check("law", True, "case 1")
        assert not report.check("law", False, "case 2", (1, 2))
        assert report.cases == 2
        assert not report.passed
        assert report.to_dict()["violations"] == [
            {"law": "law", "subject": "case 2", "witness": [1, 2]}
        ]

    def test_merge_combines_notes(self):
        left = LawReport("a", notes={"per": {"x": 1}, "seen": [1]})
        right = LawReport("b", notes={"per": {"y": 2}, "seen": [2], "extra": True})
        right.check("law", True, "case")
        right.skip("big", "too large")
        left.merge(right)
        assert left.cases == 1
        assert left.notes == {"per": {"x": 1, "y": 2}, "seen": [1, 2], "extra": True}
        assert left.skipped == ["big: too large"]
        assert not left.passed
        assert left.violations == []

    def test_suite_report_has_wall_time(self):
        report = SuiteReport("suite", wall_time_ms=12, notes={"sizes": {3, 1}})
        out = report.to_dict()
        assert out["wall_time_ms"] == 12
        assert out["notes"] == {"sizes": [1, 3]}
        assert out["passed"]
