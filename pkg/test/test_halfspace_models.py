from fractions import Fraction

import numpy as np
import pytest

from rapolytope._exceptions import ModelDomainError
from rapolytope.constants import WallKind
from rapolytope.exact_lorentz import ExactScalar, LorentzVector, lorentz_norm
from rapolytope.halfspace_models import (
    INFINITY,
    InfinityPoint,
    ball_to_upper,
    boundary_ray,
    check_isometry,
    footprint_catalog,
    footprint_residual,
    hyperboloid_distance,
    hyperboloid_to_ball,
    hyperboloid_to_upper,
    ideal_vertex_footprint,
    upper_distance,
    upper_to_hyperboloid,
    verify_standard_configuration,
    wall_footprint,
)
from rapolytope.polytope_core import build_polytope_P

P = build_polytope_P()


def facet(label: str):  # type: ignore
    return P.facets[P.index_of(label)]


def test_cube_walls_become_planes() -> None:
    wall = wall_footprint(facet("X-"))
    assert wall.kind is WallKind.PLANE
    assert wall.exact_point == (-1, 0, 0, 0)
    assert wall.exact_scalar == 1
    # -x = 1
    assert wall.equation([-1.0, 3.0, 0.5, 2.0]) == pytest.approx(0.0)
    assert wall.center is None


def test_other_walls_become_unit_spheres() -> None:
    s_x_minus = wall_footprint(facet("S_X-"))
    assert s_x_minus.kind is WallKind.SPHERE
    assert s_x_minus.exact_point == (-1, 0, 0, 0)
    assert s_x_minus.exact_scalar == 1
    corner = wall_footprint(facet("S(1,1,1,0)"))
    assert corner.kind is WallKind.SPHERE
    assert corner.exact_point == (1, 1, 1, 0)
    assert corner.radius == pytest.approx(1.0)
    np.testing.assert_allclose(corner.center, [1.0, 1.0, 1.0, 0.0])


def test_catalog_counts() -> None:
    records = footprint_catalog(P)
    assert len(records) == 48
    kinds = [record.kind for record in records]
    assert kinds.count("plane") == 8
    assert kinds.count("sphere") == 40
    first = records[0]
    assert first.label == "X+"
    assert first.normal == ["1", "0", "0", "0"]
    assert first.offset == "1"
    assert first.center is None


def test_ideal_vertex_footprints() -> None:
    assert ideal_vertex_footprint(LorentzVector([0, 0, 0, 0, 1, 1])) is INFINITY
    assert ideal_vertex_footprint(LorentzVector([0, 0, 0, 0, -1, 1])) == (0, 0, 0, 0)
    assert ideal_vertex_footprint(LorentzVector([2, 2, 2, 2, 3, 5])) == (1, 1, 1, 1)
    assert InfinityPoint() is INFINITY
    with pytest.raises(ModelDomainError):
        ideal_vertex_footprint(LorentzVector([0, 0, 0, 0, 0, 1]))


def test_boundary_ray_lands_on_its_point() -> None:
    point = (ExactScalar(Fraction(1, 2)), ExactScalar(-3), ExactScalar(0), ExactScalar(2))
    ray = boundary_ray(point)
    assert lorentz_norm(ray).is_zero()
    assert ideal_vertex_footprint(ray) == point


def test_wall_footprint_needs_unit_vector() -> None:
    with pytest.raises(ModelDomainError):
        wall_footprint(LorentzVector([2, 0, 0, 0, 0, 1]))


def test_model_maps() -> None:
    origin = LorentzVector([0, 0, 0, 0, 0, 1])
    np.testing.assert_allclose(hyperboloid_to_ball(origin), np.zeros(5))
    np.testing.assert_allclose(hyperboloid_to_upper(origin), [0, 0, 0, 0, 1])
    assert ball_to_upper([0, 0, 0, 0, 1]) is INFINITY
    np.testing.assert_allclose(upper_to_hyperboloid([0, 0, 0, 0, 1]), [0, 0, 0, 0, 0, 1])
    point = [0.3, -1.2, 0.5, 2.0, 0.7]
    np.testing.assert_allclose(hyperboloid_to_upper(upper_to_hyperboloid(point)), point, atol=1e-9)
    with pytest.raises(ModelDomainError):
        hyperboloid_to_ball([0, 0, 0, 0, 1, 0])
    with pytest.raises(ModelDomainError):
        hyperboloid_to_ball([3, 0, 0, 0, 0, 1])
    with pytest.raises(ModelDomainError):
        ball_to_upper([2, 0, 0, 0, 0])
    with pytest.raises(ModelDomainError):
        upper_to_hyperboloid([0, 0, 0, 0, -1])


def test_distances_agree() -> None:
    p, q = [0.0, 0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0, np.e]
    assert upper_distance(p, q) == pytest.approx(1.0)
    assert hyperboloid_distance(upper_to_hyperboloid(p), upper_to_hyperboloid(q)) == pytest.approx(1.0)


def test_isometry_check() -> None:
    check = check_isometry()
    assert check.passed
    assert check.pairs == 1000
    assert check_isometry(pairs=50, seed=3).pairs == 50
    assert check.to_dict()["max_abs_error"] < 1e-8


def test_footprint_residual_is_small() -> None:
    assert footprint_residual(facet("S(1,1,1,0)")) < 1e-9
    assert footprint_residual(facet("X+")) < 1e-9


def test_standard_configuration() -> None:
    report = verify_standard_configuration(P)
    assert report.planes == 8
    assert report.spheres == 40
    assert report.mismatches == []
    assert report.passed
    assert report.to_dict()["passed"]


if __name__ == "__main__":
    pytest.main()
