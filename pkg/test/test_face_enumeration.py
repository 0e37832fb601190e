import os
import random
from functools import lru_cache
from typing import List, Set, Tuple

import pytest

from rapolytope._exceptions import CertificateDisagreementError, InfiniteVolumeError
from rapolytope.constants import Family, VertexKind
from rapolytope.exact_lorentz import LorentzVector, lorentz_inner
from rapolytope.face_enumeration import (
    VertexRay,
    closure,
    enumerate_vertices,
    f_vector,
    face_lattice,
    finite_volume_certificate,
    ideal_vertices,
    is_vertex_direction,
    ridge_count,
    vertex_report,
)
from rapolytope.polytope_core import (
    PolytopeSpec,
    build_polytope_P,
    ideal_triangle,
    right_angled_pentagon,
    ultraparallel_strip,
)

P = build_polytope_P()
TRIANGLE = ideal_triangle()
PENTAGON = right_angled_pentagon()
STRIP = ultraparallel_strip()

full_suite = os.environ.get("RAPOLYTOPE_FULL_SUITE") is not None
REASON_TO_SKIP = "Set RAPOLYTOPE_FULL_SUITE to run the full vertex enumeration of the 48-facet polytope"

print("RAPOLYTOPE_FULL_SUITE is set - slow tests will run") if full_suite else print(
    "RAPOLYTOPE_FULL_SUITE not set, slow tests will not run"
)

INFINITY_RAY = LorentzVector([0, 0, 0, 0, 1, 1])
ORIGIN_RAY = LorentzVector([0, 0, 0, 0, -1, 1])
CORNER_RAY = LorentzVector([2, 2, 2, 2, 3, 5])


@lru_cache(maxsize=None)
def p_vertices() -> List[VertexRay]:
    return enumerate_vertices(P, threads=4)


def labels_of(polytope: PolytopeSpec, vertex: VertexRay) -> List[str]:
    return sorted(polytope.facets[i].label for i in vertex.incident_facets)


def test_ideal_triangle_vertices() -> None:
    vertices = enumerate_vertices(TRIANGLE)
    assert len(vertices) == 3
    assert all(v.kind is VertexKind.IDEAL for v in vertices)
    assert {v.direction for v in vertices} == {
        LorentzVector([0, 1, 1]),
        LorentzVector([0, -1, 1]),
        LorentzVector([-1, 0, 1]),
    }
    assert all(len(v.incident_facets) == 2 for v in vertices)


def test_pentagon_vertices() -> None:
    vertices = enumerate_vertices(PENTAGON)
    assert len(vertices) == 5
    assert all(v.kind is VertexKind.FINITE for v in vertices)
    assert LorentzVector([0, 0, 1]) in {v.direction for v in vertices}
    assert {tuple(labels_of(PENTAGON, v)) for v in vertices} == {
        ("E1", "E2"),
        ("E2", "E3"),
        ("E3", "E4"),
        ("E4", "E5"),
        ("E1", "E5"),
    }


def test_strip_has_no_vertices() -> None:
    assert enumerate_vertices(STRIP) == []


def test_search_agrees_with_exhaustive_and_threads() -> None:
    for polytope in (TRIANGLE, PENTAGON):
        pruned = enumerate_vertices(polytope)
        assert enumerate_vertices(polytope, exhaustive=True) == pruned
        assert enumerate_vertices(polytope, threads=3) == pruned


def test_vertices_independent_of_facet_order() -> None:
    reversed_pentagon = PolytopeSpec(2, tuple(reversed(PENTAGON.facets)))
    original = {(v.direction, v.kind) for v in enumerate_vertices(PENTAGON)}
    permuted = {(v.direction, v.kind) for v in enumerate_vertices(reversed_pentagon)}
    assert original == permuted


def test_vertex_report_records() -> None:
    records = vertex_report(TRIANGLE, enumerate_vertices(TRIANGLE))
    assert len(records) == 3
    assert all(record.kind == "ideal" and record.incident_count == 2 for record in records)


def test_certificates_of_fixtures() -> None:
    triangle = finite_volume_certificate(TRIANGLE)
    assert triangle.finite_volume and triangle.method_combinatorial and triangle.method_ray_oracle
    assert triangle.ideal_vertex_count == 3
    assert triangle.finite_vertex_count == 0

    pentagon = finite_volume_certificate(PENTAGON)
    assert pentagon
    assert pentagon.finite_vertex_count == 5

    strip = finite_volume_certificate(STRIP)
    assert not strip
    assert not strip.method_combinatorial and not strip.method_ray_oracle


def test_disagreeing_methods_raise(mocker) -> None:  # type: ignore
    mocker.patch(
        "rapolytope.face_enumeration._ray_oracle_method",
        return_value=(False, [{"method": "ray_oracle", "reason": "forced"}]),
    )
    with pytest.raises(CertificateDisagreementError):
        finite_volume_certificate(TRIANGLE)


def test_f_vectors_of_fixtures() -> None:
    assert f_vector(TRIANGLE) == (3, 3)
    assert f_vector(PENTAGON) == (5, 5)
    with pytest.raises(InfiniteVolumeError):
        f_vector(STRIP)


def test_closure_of_one_side() -> None:
    vertices = enumerate_vertices(PENTAGON)
    facets, containing = closure([0], vertices)
    assert facets == frozenset([0])
    assert len(containing) == 2
    lattice = face_lattice(PENTAGON, vertices)
    assert len(lattice.faces_of_facet(0, 0)) == 2


def test_ridge_counts() -> None:
    """
    Cube walls meet 19 other facets and type III facets meet 12, so the counts tell the classes apart.
    """
    assert ridge_count(P, P.index_of("X+")) == 19
    assert ridge_count(P, P.index_of("S_X+")) == 19
    assert ridge_count(P, P.index_of("S(1,1,1,0)")) == 12
    assert {ridge_count(P, i) for i in P.indices_of_family(Family.TYPE_I, Family.TYPE_II)} == {19}
    assert {ridge_count(P, i) for i in P.indices_of_family(Family.TYPE_III)} == {12}


def test_known_ideal_vertices_of_p() -> None:
    assert is_vertex_direction(P, INFINITY_RAY)
    assert is_vertex_direction(P, ORIGIN_RAY)
    assert is_vertex_direction(P, CORNER_RAY)
    assert not is_vertex_direction(P, LorentzVector([0, 0, 0, 0, 0, 1]))
    assert not is_vertex_direction(P, LorentzVector([0, 0, 0, 0, 0, 0]))


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
def test_p_has_finite_volume() -> None:
    certificate = finite_volume_certificate(P, p_vertices())
    assert certificate.finite_volume
    assert certificate.method_combinatorial and certificate.method_ray_oracle
    assert certificate.failures == []


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
def test_p_ideal_vertices_have_box_links() -> None:
    vertices = p_vertices()
    by_direction = {v.direction: v for v in vertices}
    assert frozenset(P.indices_of_family(Family.TYPE_I)) == by_direction[INFINITY_RAY].incident_facets
    assert frozenset(P.indices_of_family(Family.TYPE_II)) == by_direction[ORIGIN_RAY].incident_facets
    assert labels_of(P, by_direction[CORNER_RAY]) == sorted(
        ["X+", "Y+", "Z+", "W+", "S(0,1,1,1)", "S(1,0,1,1)", "S(1,1,0,1)", "S(1,1,1,0)"]
    )
    for vertex in ideal_vertices(vertices):
        assert len(vertex.incident_facets) == 8
    for vertex in vertices:
        assert all(lorentz_inner(vertex.direction, v).sign() <= 0 for v in P.vectors)


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
def test_p_f_vector_counts_facets() -> None:
    faces = f_vector(P, p_vertices())
    assert faces[-1] == 48
    assert faces[0] == len(p_vertices())


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
def test_p_vertex_counts_and_f_vector() -> None:
    vertices = p_vertices()
    assert len(vertices) == 122
    assert sum(1 for v in vertices if v.kind is VertexKind.IDEAL) == 58
    assert sum(1 for v in vertices if v.kind is VertexKind.FINITE) == 64
    assert f_vector(P, vertices) == (122, 624, 800, 344, 48)


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
@pytest.mark.parametrize("seed", [7, 2024])
def test_p_vertices_do_not_depend_on_facet_order(seed: int) -> None:
    facets = list(P.facets)
    random.Random(seed).shuffle(facets)
    shuffled = PolytopeSpec(P.d, tuple(facets))

    def signature(
        polytope: PolytopeSpec, vertices: List[VertexRay]
    ) -> Set[Tuple[LorentzVector, VertexKind, Tuple[str, ...]]]:
        return {(v.direction, v.kind, tuple(labels_of(polytope, v))) for v in vertices}

    assert signature(shuffled, enumerate_vertices(shuffled, threads=4)) == signature(P, p_vertices())


if __name__ == "__main__":
    pytest.main()
