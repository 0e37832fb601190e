from fractions import Fraction
from pathlib import Path

import orjson
import pytest
from typer.testing import CliRunner

from rapolytope.constants import Family
from rapolytope.exact_lorentz import LorentzVector
from rapolytope.polytope_core import FacetNormal, PolytopeSpec, build_polytope_P, dump_polytope, load_polytope
from rapolytope.typer_cli import rapolytope_app

runner = CliRunner()
P = build_polytope_P()


def write_polytope(path: Path, polytope: PolytopeSpec) -> Path:
    path.write_bytes(dump_polytope(polytope))
    return path


def replace_facet(index: int, facet: FacetNormal) -> PolytopeSpec:
    facets = list(P.facets)
    facets[index] = facet
    return PolytopeSpec(P.d, tuple(facets))


def test_gen_p_round_trips() -> None:
    result = runner.invoke(rapolytope_app, ["gen-p"])
    assert result.exit_code == 0
    loaded = load_polytope(result.stdout.encode())
    assert loaded.labels == P.labels
    assert loaded.vectors == P.vectors


def test_gram() -> None:
    result = runner.invoke(rapolytope_app, ["gram", "--threads", "2"])
    assert result.exit_code == 0
    assert "0, -1, -2, -3, -4, -5" in result.stdout


def test_ridges_of_one_facet() -> None:
    result = runner.invoke(rapolytope_app, ["ridges", "--facet", "S(1,1,1,0)"])
    assert result.exit_code == 0
    assert "ridges:S(1,1,1,0)  12" in result.stdout


def test_corrupted_normal_fails_right_angled_check(tmp_path: Path) -> None:
    """
    X+ tilted to (3/5, 4/5, 0, 0, 1, 1) stays a unit vector but meets X- at a non-right angle.
    """
    tilted = FacetNormal(
        LorentzVector([Fraction(3, 5), Fraction(4, 5), 0, 0, 1, 1]), "X+", Family.TYPE_I
    )
    source = write_polytope(tmp_path / "corrupted.json", replace_facet(P.index_of("X+"), tilted))
    report = tmp_path / "report.json"
    result = runner.invoke(
        rapolytope_app, ["check-right-angled", "--input", str(source), "--json", str(report)]
    )
    assert result.exit_code == 1
    assert "X+" in result.stdout and "X-" in result.stdout
    check = orjson.loads(report.read_bytes())["checks"][0]
    assert not check["passed"]
    assert check["value"]["counterexample"] == ["X+", "X-"]
    assert check["value"]["counterexample_inner"] == "-3/5"


def test_swapped_tags_fail_position_check(tmp_path: Path) -> None:
    x, sx = P.index_of("X+"), P.index_of("S_X+")
    facets = list(P.facets)
    facets[x] = FacetNormal(facets[x].vector, "X+", Family.TYPE_II)
    facets[sx] = FacetNormal(facets[sx].vector, "S_X+", Family.TYPE_I)
    source = write_polytope(tmp_path / "swapped.json", PolytopeSpec(P.d, tuple(facets)))
    result = runner.invoke(rapolytope_app, ["verify-positions", "--input", str(source)])
    assert result.exit_code == 1
    assert "28 mismatches" in result.stdout


def test_unreadable_input_exits_2(tmp_path: Path) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert runner.invoke(rapolytope_app, ["gram", "--input", str(broken)]).exit_code == 2
    shapeless = tmp_path / "shapeless.json"
    shapeless.write_text('{"facets": []}')
    assert runner.invoke(rapolytope_app, ["gram", "--input", str(shapeless)]).exit_code == 2
    missing = tmp_path / "missing.json"
    assert runner.invoke(rapolytope_app, ["gram", "--input", str(missing)]).exit_code == 2


@pytest.mark.parametrize(
    "content",
    [
        {"dimension": 5, "facets": [{"label": "X+", "vector": [1.0, 0, 0, 0, 1, 1]}]},
        {"dimension": 5, "facets": 7},
        {"dimension": 5, "facets": ["X+"]},
        {"dimension": 5, "facets": [{"label": "X+", "vector": 3}]},
        [1, 2, 3],
    ],
)
def test_malformed_facets_exit_2(tmp_path: Path, content: object) -> None:
    source = tmp_path / "malformed.json"
    source.write_bytes(orjson.dumps(content))
    result = runner.invoke(rapolytope_app, ["check-right-angled", "--input", str(source)])
    assert result.exit_code == 2
    assert result.exception is None or isinstance(result.exception, SystemExit)


def test_stated_command_names_and_aliases(tmp_path: Path) -> None:
    for command in ("verify-lemma32", "verify-positions"):
        result = runner.invoke(rapolytope_app, [command, "--threads", "2"])
        assert result.exit_code == 0, result.stdout
        assert "verify-positions: pass" in result.stdout
    source = write_polytope(tmp_path / "p.json", P)
    for command in ("verify-lemma33", "verify-families"):
        result = runner.invoke(rapolytope_app, [command, "--input", str(source), "--threads", "2"])
        assert result.exit_code == 0, result.stdout
        assert "verify-families: pass" in result.stdout


def test_unknown_label_exits_2() -> None:
    assert runner.invoke(rapolytope_app, ["audit", "--remove", "Q+"]).exit_code == 2
    assert runner.invoke(rapolytope_app, ["ridges", "--facet", "Q+"]).exit_code == 2


def test_audit_of_disjoint_pair() -> None:
    result = runner.invoke(rapolytope_app, ["audit", "--remove", "X+,S_X-"])
    assert result.exit_code == 0
    cube_paired = runner.invoke(
        rapolytope_app, ["audit", "--remove", "X+,S_X-", "--strategy", "cube-paired"]
    )
    assert cube_paired.exit_code == 1


def test_json_report_is_deterministic(tmp_path: Path) -> None:
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert runner.invoke(rapolytope_app, ["gram", "--json", str(first)]).exit_code == 0
    assert runner.invoke(rapolytope_app, ["gram", "--json", str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    report = orjson.loads(first.read_bytes())
    assert report["command"] == "gram"
    assert report["passed"]
    assert "duration_seconds" not in report


if __name__ == "__main__":
    pytest.main()
