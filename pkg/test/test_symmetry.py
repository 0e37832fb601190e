import itertools
import os
import random
from typing import Tuple

import pytest

from rapolytope._exceptions import RealizationError
from rapolytope.constants import Family
from rapolytope.exact_lorentz import (
    ONE,
    ZERO,
    lorentz_form_matrix,
    matrix_multiply,
    matrix_transpose,
    reflection_matrix,
)
from rapolytope.polytope_core import build_polytope_P, ideal_triangle, right_angled_pentagon
from rapolytope.symmetry import (
    FacetPermutation,
    SymmetryGroup,
    automorphisms,
    closure,
    coordinate_permutation,
    generating_reflections,
    count_automorphisms_with_matcher,
    orbits,
    phi_star,
    phi_star_image,
    phi_star_kernel,
    preserves_gram,
    realize_matrix,
    reflection_permutation,
    s4_subgroup,
    symmetry_report,
    verify_family_preservation,
)

P = build_polytope_P()
G = automorphisms(P, threads=4)

full_suite = os.environ.get("RAPOLYTOPE_FULL_SUITE") is not None
REASON_TO_SKIP = "Set RAPOLYTOPE_FULL_SUITE to realize sampled pairs of the 768 symmetries"


def test_permutation_basics() -> None:
    p = FacetPermutation((1, 2, 0))
    q = FacetPermutation((1, 0, 2))
    assert p.order == 3
    assert p.compose(q)(0) == p(q(0)) == 2
    assert p.inverse().compose(p).is_identity()
    assert p.cycles() == [(0, 1, 2)]
    assert p.cycle_notation(["a", "b", "c"]) == "(a b c)"
    assert FacetPermutation.identity(3).cycle_notation(["a", "b", "c"]) == "()"


def test_group_order() -> None:
    assert G.order == 768
    assert len(closure(G.generators, len(P))) == 768
    assert all(preserves_gram(P, sigma) for sigma in G.generators)


def test_membership_on_a_group_given_by_generators() -> None:
    assert G.elements is not None
    lazy = SymmetryGroup(len(P), list(G.generators))
    assert lazy.elements is None
    assert G.elements[5] in lazy
    assert lazy.elements is not None
    swap = list(range(len(P)))
    swap[0], swap[1] = 1, 0
    assert FacetPermutation(tuple(swap)) not in lazy
    assert lazy.order == 768
    assert isinstance(lazy._members, frozenset)


def test_small_groups_agree_with_vf2() -> None:
    triangle = ideal_triangle()
    assert automorphisms(triangle).order == 6
    assert count_automorphisms_with_matcher(triangle) == 6
    pentagon = right_angled_pentagon()
    assert automorphisms(pentagon).order == count_automorphisms_with_matcher(pentagon)


def test_every_symmetry_is_a_lorentz_isometry() -> None:
    J = lorentz_form_matrix(P.d)
    assert G.elements is not None
    for sigma in G.elements:
        A = realize_matrix(sigma, P)
        assert matrix_multiply(matrix_multiply(A, J), matrix_transpose(A)) == J


def test_realization_respects_composition_of_generators() -> None:
    for sigma, tau in itertools.product(G.generators, repeat=2):
        assert realize_matrix(sigma.compose(tau), P) == matrix_multiply(
            realize_matrix(sigma, P), realize_matrix(tau, P)
        )


@pytest.mark.skipif(not full_suite, reason=REASON_TO_SKIP)
def test_realization_respects_composition_of_sampled_elements() -> None:
    assert G.elements is not None
    rng = random.Random(11)
    for _ in range(300):
        sigma, tau = rng.choice(G.elements), rng.choice(G.elements)
        assert realize_matrix(sigma.compose(tau), P) == matrix_multiply(
            realize_matrix(sigma, P), realize_matrix(tau, P)
        )


def test_reflection_realizes_its_own_matrix() -> None:
    u5 = generating_reflections()[4]
    sigma = reflection_permutation(u5, P)
    assert sigma(P.index_of("X+")) == P.index_of("S_X+")
    assert sigma(P.index_of("S(1,1,1,0)")) == P.index_of("S(1,1,1,0)")
    assert realize_matrix(sigma, P) == reflection_matrix(u5)


def test_non_geometric_permutation_is_rejected() -> None:
    swap = list(range(len(P)))
    swap[0], swap[1] = 1, 0
    sigma = FacetPermutation(tuple(swap))
    assert not preserves_gram(P, sigma)
    with pytest.raises(RealizationError):
        realize_matrix(sigma, P)


def test_action_on_cubes() -> None:
    """
    Only the identity and the swap of each cube's two walls act trivially on the cubes.
    """
    kernel = phi_star_kernel(G, P)
    assert len(kernel) == 2
    assert len(phi_star_image(G, P)) == 384
    swap = next(sigma for sigma in kernel if not sigma.is_identity())
    assert swap == reflection_permutation(generating_reflections()[4], P)
    assert phi_star(swap, P) == tuple(range(8))


def test_family_preservation() -> None:
    report = verify_family_preservation(G, P)
    assert report.preserves_classes
    assert report.swaps_wholesale
    assert report.passed
    assert report.ridge_counts == {"I/II": [19], "III": [12]}
    assert report.elements_checked == 768


def test_orbits() -> None:
    assert [len(orbit) for orbit in orbits(G)] == [16, 32]
    type_i = P.indices_of_family(Family.TYPE_I)
    assert [[P.labels[i] for i in orbit] for orbit in orbits(s4_subgroup(P), type_i)] == [
        ["X+", "Y+", "Z+", "W+"],
        ["X-", "Y-", "Z-", "W-"],
    ]


def test_coordinate_permutation() -> None:
    sigma = coordinate_permutation((1, 0, 2, 3), P)
    assert sigma(P.index_of("X+")) == P.index_of("Y+")
    assert sigma in G
    with pytest.raises(RealizationError):
        coordinate_permutation((0, 0, 1, 2), P)


@pytest.mark.parametrize("permutation", [(1, 0, 2, 3), (1, 2, 0, 3), (3, 2, 1, 0)])
def test_coordinate_permutation_realizes_to_permutation_matrix(permutation: Tuple[int, ...]) -> None:
    expected = [
        [ONE if (i < 4 and j < 4 and i == permutation[j]) or (i >= 4 and i == j) else ZERO for j in range(6)]
        for i in range(6)
    ]
    assert realize_matrix(coordinate_permutation(permutation, P), P) == expected


def test_report() -> None:
    report = symmetry_report(P, G)
    assert report.order == 768
    assert report.first_isomorphism_holds
    assert report.reflections_generate
    assert not report.s4_transitive_on_type_i
    assert len(report.orbits) == 2
    assert report.to_dict()["image_order"] == 384


if __name__ == "__main__":
    pytest.main()
