import pytest

from rapolytope.cube_diagram import verify_position_predictions
from rapolytope.face_enumeration import enumerate_vertices, vertex_report
from rapolytope.fuchsian_ends import determination_audit, selection_from_labels
from rapolytope.halfspace_models import footprint_catalog
from rapolytope.polytope_core import build_polytope_P, ideal_triangle

try:
    import pandas as pd  # type: ignore
except ImportError:
    pd = None

pandas_installed = pd is not None
REASON_TO_SKIP = "Need pandas installed in order to run the dataframe tests"

print("pandas is installed - dataframe tests will run") if pandas_installed else print(
    "pandas not installed, dataframe tests will not run"
)

P = build_polytope_P()


@pytest.mark.skipif(not pandas_installed, reason=REASON_TO_SKIP)
def test_vertex_dataframe() -> None:
    triangle = ideal_triangle()
    df = vertex_report(triangle, enumerate_vertices(triangle)).to_dataframe()
    assert list(df.columns) == ["direction", "kind", "incident", "incident_count"]
    assert len(df) == 3
    assert set(df["incident_count"]) == {2}


@pytest.mark.skipif(not pandas_installed, reason=REASON_TO_SKIP)
def test_footprint_dataframe() -> None:
    df = footprint_catalog(P).to_dataframe()
    assert len(df) == 48
    assert (df["kind"] == "plane").sum() == 8
    assert df[df["kind"] == "sphere"]["normal"].isna().all()


@pytest.mark.skipif(not pandas_installed, reason=REASON_TO_SKIP)
def test_pair_check_dataframe() -> None:
    """
    Every one of the 1128 pair records agrees, so the disagreement frame is empty but keeps its columns
    """
    records = verify_position_predictions(P).records
    df = records.to_dataframe()
    assert len(df) == 1128
    assert df["agrees"].all()
    empty = records.disagreements().to_dataframe()
    assert len(empty) == 0
    assert list(empty.columns) == list(df.columns)


@pytest.mark.skipif(not pandas_installed, reason=REASON_TO_SKIP)
def test_joined_list_columns() -> None:
    report = determination_audit(P, selection_from_labels(P, ["X+", "S_X-"]))
    df = report.records.to_dataframe(join_lists=True)
    row = df[df["target"] == "S(0,1,1,1)"].iloc[0]
    assert row["removed"] == "X+ S_X-"
    assert row["tangent_to"] == "X-"


if __name__ == "__main__":
    pytest.main()
