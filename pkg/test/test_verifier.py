import os
from pathlib import Path

import pytest

from rapolytope.constants import AuditStrategy
from rapolytope.polytope_core import ideal_triangle, right_angled_pentagon, ultraparallel_strip
from rapolytope.verifier import PolytopeVerifier, load_golden_values

builtin = PolytopeVerifier(threads=2)
pentagon = PolytopeVerifier(right_angled_pentagon())

full_suite = os.environ.get("RAPOLYTOPE_FULL_SUITE") is not None
REASON_TO_SKIP = "Set RAPOLYTOPE_FULL_SUITE to run every check on the 48-facet polytope"


def test_shipped_golden_values() -> None:
    golden = load_golden_values()
    assert golden["symmetry_order"] == 768
    assert golden["ridge_counts"] == {"I/II": 19, "III": 12}
    assert golden["vertex_counts"] == {"finite": 64, "ideal": 58}
    assert golden["f_vector"] == [122, 624, 800, 344, 48]
    assert golden["census"] == {
        "strict": {"maximal_sets": 1304, "orbits": 10},
        "weak": {"maximal_sets": 5272, "orbits": 34},
    }
    assert builtin.golden == golden
    assert pentagon.golden == {}


def test_builtin_cheap_checks_pass() -> None:
    for report in (builtin.gram(), builtin.right_angled(), builtin.positions(), builtin.ridges()):
        assert report.passed, report.failed_checks()
    names = [check.name for check in builtin.gram().checks]
    assert "golden:gram_values" in names


def test_ridges_of_one_facet() -> None:
    report = builtin.ridges("S_W-")
    assert report.checks[0].value == 19


def test_audit_reports() -> None:
    assert builtin.audit(["X+", "S_X-"]).passed
    assert not builtin.audit(["X+", "S_X-"], AuditStrategy.CUBE_PAIRED).passed
    conflicting = builtin.audit(["W+", "S_W+"])
    assert conflicting.checks[0].name == "removed_set_disjoint"
    assert not conflicting.checks[0].passed


def test_verify_all_on_fixtures() -> None:
    report = pentagon.verify_all()
    assert report.passed
    names = [check.name for check in report.checks]
    assert "finite-volume/f_vector" in names
    assert not any(name.startswith("symmetries/") for name in names)
    assert PolytopeVerifier(ideal_triangle()).verify_all().passed
    strip = PolytopeVerifier(ultraparallel_strip()).verify_all()
    assert not strip.passed
    assert "finite-volume/finite_volume" in [check.name for check in strip.failed_checks()]


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
def test_verify_all_compares_computed_golden_values() -> None:
    report = builtin.verify_all()
    assert report.passed, report.failed_checks()
    names = {check.name for check in report.checks}
    assert {
        "vertices/golden:vertex_counts",
        "finite-volume/golden:f_vector",
        "ends:strict/golden:census:strict",
        "ends:weak/golden:census:weak",
    } <= names


def test_golden_mismatch_fails() -> None:
    verifier = PolytopeVerifier(right_angled_pentagon(), golden={"facet_count": 6, "pair_count": 10})
    report = verifier.gram()
    assert not report.passed
    assert [check.name for check in report.failed_checks()] == ["golden:facet_count"]


def test_input_digest() -> None:
    assert pentagon.input_digest == PolytopeVerifier(right_angled_pentagon()).input_digest
    assert pentagon.input_digest != PolytopeVerifier(ideal_triangle()).input_digest


def test_freeze_golden_keeps_shipped_values(tmp_path: Path, mocker) -> None:  # type: ignore
    mocker.patch.object(
        PolytopeVerifier,
        "computed_golden_values",
        return_value={"vertex_counts": {"finite": 0, "ideal": 1}},
    )
    destination = tmp_path / "golden.json"
    values = PolytopeVerifier().freeze_golden(destination)
    written = load_golden_values(destination)
    assert written == values
    assert written["symmetry_order"] == 768
    assert written["vertex_counts"] == {"finite": 0, "ideal": 1}


if __name__ == "__main__":
    pytest.main()
