"""
Symmetries of a polytope as Gram-preserving permutations of its facets, their exact Lorentz
matrices, the induced action on the cubes of the 4-cube and the reflection generators.
"""
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx  # type: ignore
from networkx.algorithms import isomorphism  # type: ignore
from networkx.utils import UnionFind  # type: ignore

from rapolytope._exceptions import FamilyTagError, RealizationError
from rapolytope._typing import JsonDict, Partition
from rapolytope._utils import map_in_threads
from rapolytope.constants import Family
from rapolytope.cube_diagram import CubeFace, cubes
from rapolytope.exact_lorentz import (
    ExactScalar,
    LorentzVector,
    Matrix,
    inverse_matrix,
    lorentz_form_matrix,
    matrix_multiply,
    matrix_transpose,
    matrix_vector,
    rank,
    reflect,
)
from rapolytope.face_enumeration import ridge_count
from rapolytope.polytope_core import PolytopeSpec

logger = getLogger("rapolytope.symmetry")


@dataclass(frozen=True)
class FacetPermutation:
    """
    The permutation i -> mapping[i] of facet indices.
    """

    mapping: Tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "FacetPermutation":
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __len__(self) -> int:
        return len(self.mapping)

    def compose(self, other: "FacetPermutation") -> "FacetPermutation":
        """
        self after other.
        """
        return FacetPermutation(tuple(self.mapping[j] for j in other.mapping))

    def inverse(self) -> "FacetPermutation":
        inverse = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inverse[j] = i
        return FacetPermutation(tuple(inverse))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.mapping))

    @property
    def order(self) -> int:
        power, k = self, 1
        while not power.is_identity():
            power, k = self.compose(power), k + 1
        return k

    def cycles(self) -> List[Tuple[int, ...]]:
        seen: Set[int] = set()
        result = []
        for start in range(len(self.mapping)):
            if start in seen or self.mapping[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            current = self.mapping[start]
            while current != start:
                cycle.append(current)
                seen.add(current)
                current = self.mapping[current]
            result.append(tuple(cycle))
        return result

    def cycle_notation(self, labels: Sequence[str]) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(labels[i] for i in cycle) + ")" for cycle in cycles)


@dataclass
class SymmetryGroup:
    degree: int
    generators: List[FacetPermutation]
    elements: Optional[List[FacetPermutation]] = None
    _members: Optional[FrozenSet[FacetPermutation]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.elements is not None:
            self._members = frozenset(self.elements)

    def _expand(self) -> FrozenSet[FacetPermutation]:
        if self.elements is None:
            self.elements = closure(self.generators, self.degree)
        if self._members is None:
            self._members = frozenset(self.elements)
        return self._members

    @property
    def order(self) -> int:
        return len(self._expand())

    def __contains__(self, item: object) -> bool:
        return item in self._expand()


def closure(generators: Iterable[FacetPermutation], degree: int) -> List[FacetPermutation]:
    """
    All products of the generators, breadth first from the identity.
    """
    gens = list(generators)
    identity = FacetPermutation.identity(degree)
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = g.compose(current)
            if product not in seen:
                seen.add(product)
                queue.append(product)
    return sorted(seen, key=lambda p: p.mapping)


def _greedy_generators(elements: Sequence[FacetPermutation], degree: int) -> List[FacetPermutation]:
    generators: List[FacetPermutation] = []
    reached = {FacetPermutation.identity(degree)}
    for element in elements:
        if element in reached:
            continue
        generators.append(element)
        reached = set(closure(generators, degree))
        if len(reached) == len(elements):
            break
    return generators


def _value_key(value: ExactScalar) -> Tuple[Fraction, Fraction]:
    return value.rat_part, value.root2_part


def preserves_gram(P: PolytopeSpec, sigma: FacetPermutation) -> bool:
    gram = P.gram
    n = len(P)
    return all(
        gram[sigma(i)][sigma(j)] == gram[i][j] for i in range(n) for j in range(i, n)
    )


def automorphisms(P: PolytopeSpec, threads: int = 1) -> SymmetryGroup:
    """
    Every permutation of the facets preserving the exact Gram matrix, found by backtracking
    over facet images with Gram-row multisets as initial colours.
    """
    n = len(P)
    keys = [[_value_key(value) for value in row] for row in P.gram]
    colours = [tuple(sorted(row)) for row in keys]
    by_colour: Dict[Tuple[Tuple[Fraction, Fraction], ...], List[int]] = {}
    for i, colour in enumerate(colours):
        by_colour.setdefault(colour, []).append(i)
    logger.debug("%s colour classes", len(by_colour))

    found: List[FacetPermutation] = []
    image = [-1] * n
    used = [False] * n

    def assign(i: int) -> None:
        if i == n:
            found.append(FacetPermutation(tuple(image)))
            return
        row = keys[i]
        for candidate in by_colour[colours[i]]:
            if used[candidate]:
                continue
            candidate_row = keys[candidate]
            if any(candidate_row[image[j]] != row[j] for j in range(i)):
                continue
            image[i] = candidate
            used[candidate] = True
            assign(i + 1)
            used[candidate] = False
        image[i] = -1

    assign(0)
    checks = map_in_threads(lambda sigma: preserves_gram(P, sigma), found, threads)
    if not all(checks):
        raise RealizationError("Automorphism search returned a permutation that breaks the Gram matrix")
    found.sort(key=lambda p: p.mapping)
    logger.info("found %s Gram-preserving facet permutations", len(found))
    return SymmetryGroup(n, _greedy_generators(found, n), found)


def gram_graph(P: PolytopeSpec) -> nx.Graph:
    graph = nx.complete_graph(len(P))
    for i, j in graph.edges:
        graph.edges[i, j]["value"] = _value_key(P.gram[i][j])
    return graph


def count_automorphisms_with_matcher(P: PolytopeSpec) -> int:
    """
    Independent count of Gram automorphisms through networkx's VF2 matcher. Only practical for
    small polytopes; used to cross-check the backtracking search.
    """
    graph = gram_graph(P)
    matcher = isomorphism.GraphMatcher(
        graph, graph, edge_match=isomorphism.categorical_edge_match("value", None)
    )
    return sum(1 for _ in matcher.isomorphisms_iter())


def _spanning_indices(P: PolytopeSpec) -> List[int]:
    chosen: List[int] = []
    for i, v in enumerate(P.vectors):
        if rank([P.vectors[j] for j in chosen] + [v]) > len(chosen):
            chosen.append(i)
        if len(chosen) == P.d + 1:
            return chosen
    raise RealizationError("The facet normals do not span, so no matrix is determined")


def realize_matrix(sigma: FacetPermutation, P: PolytopeSpec) -> Matrix:
    """
    The unique exact matrix A with A v_i = v_sigma(i) for every facet, checked to satisfy A J A^T = J.
    """
    basis = _spanning_indices(P)
    source = matrix_transpose([list(P.vectors[i].coords) for i in basis])
    target = matrix_transpose([list(P.vectors[sigma(i)].coords) for i in basis])
    A = matrix_multiply(target, inverse_matrix(source))
    for i, v in enumerate(P.vectors):
        if matrix_vector(A, v) != P.vectors[sigma(i)]:
            raise RealizationError(
                f"No linear map sends every facet normal along the permutation "
                f"(fails at {P.facets[i].label})"
            )
    form = lorentz_form_matrix(P.d)
    if matrix_multiply(matrix_multiply(A, form), matrix_transpose(A)) != form:
        raise RealizationError("The realizing matrix does not preserve the Lorentzian form")
    return A


@dataclass
class FamilyPreservationReport:
    """
    Whether every symmetry keeps type I and II facets apart from type III facets, and whether
    moving one type I facet into type II moves all of them.
    """

    elements_checked: int
    preserves_classes: bool
    swaps_wholesale: bool
    ridge_counts: Dict[str, List[int]] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.preserves_classes and self.swaps_wholesale

    def to_dict(self) -> JsonDict:
        return {
            "elements_checked": self.elements_checked,
            "preserves_classes": self.preserves_classes,
            "swaps_wholesale": self.swaps_wholesale,
            "ridge_counts": self.ridge_counts,
            "violations": self.violations,
        }


def verify_family_preservation(G: SymmetryGroup, P: PolytopeSpec) -> FamilyPreservationReport:
    type_i = set(P.indices_of_family(Family.TYPE_I))
    type_ii = set(P.indices_of_family(Family.TYPE_II))
    type_iii = set(P.indices_of_family(Family.TYPE_III))
    cube_walls = type_i | type_ii
    elements = G.elements if G.elements is not None else closure(G.generators, G.degree)
    preserves, wholesale = True, True
    violations = []
    for sigma in elements:
        if {sigma(i) for i in cube_walls} != cube_walls or {sigma(i) for i in type_iii} != type_iii:
            preserves = False
            violations.append("mixes classes: " + sigma.cycle_notation(P.labels))
        moved = {sigma(i) for i in type_i}
        if moved & type_ii and moved != type_ii:
            wholesale = False
            violations.append("partial swap: " + sigma.cycle_notation(P.labels))
    ridge_counts = {
        "I/II": sorted({ridge_count(P, i) for i in cube_walls}),
        "III": sorted({ridge_count(P, i) for i in type_iii}),
    }
    if set(ridge_counts["I/II"]) & set(ridge_counts["III"]):
        logger.warning("ridge counts do not separate the two facet classes: %s", ridge_counts)
    return FamilyPreservationReport(len(elements), preserves, wholesale, ridge_counts, violations)


def phi_star(sigma: FacetPermutation, P: PolytopeSpec) -> Tuple[int, ...]:
    """
    The permutation of the 8 cubes induced through a(.) on type I and type II facets.
    Cubes are indexed as in cube_diagram.cubes().
    """
    cube_list = cubes()
    position = {face: k for k, face in enumerate(cube_list)}
    images: Dict[int, int] = {}
    for i in P.indices_of_family(Family.TYPE_I, Family.TYPE_II):
        source = _cube_of(P, i)
        target = _cube_of(P, sigma(i))
        if source is None or target is None:
            raise FamilyTagError(
                f"{P.facets[i].label} is not sent to a cube wall by the permutation"
            )
        k, m = position[source], position[target]
        if images.setdefault(k, m) != m:
            raise FamilyTagError(f"The induced map on cubes is not well defined at {source}")
    if sorted(images) != list(range(len(cube_list))):
        raise FamilyTagError("The permutation does not act on all 8 cubes")
    return tuple(images[k] for k in range(len(cube_list)))


def _cube_of(P: PolytopeSpec, i: int) -> Optional[CubeFace]:
    facet = P.facets[i]
    if facet.family not in (Family.TYPE_I, Family.TYPE_II):
        return None
    return CubeFace(tuple(int(c.rat_part) for c in facet.a_projection))


def phi_star_kernel(G: SymmetryGroup, P: PolytopeSpec) -> List[FacetPermutation]:
    identity = tuple(range(8))
    elements = G.elements if G.elements is not None else closure(G.generators, G.degree)
    return [sigma for sigma in elements if phi_star(sigma, P) == identity]


def phi_star_image(G: SymmetryGroup, P: PolytopeSpec) -> Set[Tuple[int, ...]]:
    elements = G.elements if G.elements is not None else closure(G.generators, G.degree)
    return {phi_star(sigma, P) for sigma in elements}


def orbits(G: SymmetryGroup, facets: Optional[Iterable[int]] = None) -> Partition:
    """
    Orbits of the group on the given facet indices (all facets by default).
    """
    chosen = sorted(facets) if facets is not None else list(range(G.degree))
    union = UnionFind(range(G.degree))
    for generator in G.generators:
        for i in range(G.degree):
            union.union(i, generator(i))
    groups: Dict[int, List[int]] = {}
    for i in chosen:
        groups.setdefault(union[i], []).append(i)
    return sorted(groups.values())


def generating_reflections() -> List[LorentzVector]:
    """
    The five unit vectors whose reflections generate the symmetry group of the built-in polytope.
    """
    half_root = ExactScalar(0, Fraction(1, 2))
    zero = ExactScalar(0)
    return [
        LorentzVector([1, 0, 0, 0, 0, 0]),
        LorentzVector([-half_root, half_root, zero, zero, zero, zero]),
        LorentzVector([zero, -half_root, half_root, zero, zero, zero]),
        LorentzVector([zero, zero, -half_root, half_root, zero, zero]),
        LorentzVector(
            [zero, zero, zero, zero, ExactScalar(0, Fraction(-3, 4)), ExactScalar(0, Fraction(-1, 4))]
        ),
    ]


def reflection_permutation(u: LorentzVector, P: PolytopeSpec) -> FacetPermutation:
    index = {v: i for i, v in enumerate(P.vectors)}
    mapping = []
    for facet in P.facets:
        image = reflect(u, facet.vector)
        if image not in index:
            raise RealizationError(
                f"The reflection in {u!r} sends {facet.label} outside the facet normals"
            )
        mapping.append(index[image])
    return FacetPermutation(tuple(mapping))


def generated_group(generators: Sequence[FacetPermutation], degree: int) -> SymmetryGroup:
    return SymmetryGroup(degree, list(generators), closure(generators, degree))


def coordinate_permutation(permutation: Sequence[int], P: PolytopeSpec) -> FacetPermutation:
    """
    The facet permutation induced by moving coordinate k of the first four to position permutation[k].
    """
    if sorted(permutation) != [0, 1, 2, 3]:
        raise RealizationError(f"{list(permutation)} is not a permutation of four coordinates")
    index = {v: i for i, v in enumerate(P.vectors)}
    mapping = []
    for facet in P.facets:
        coords = list(facet.vector.coords)
        moved = list(coords)
        for k in range(4):
            moved[permutation[k]] = coords[k]
        image = LorentzVector(moved)
        if image not in index:
            raise RealizationError(f"Permuting coordinates sends {facet.label} outside the facets")
        mapping.append(index[image])
    return FacetPermutation(tuple(mapping))


def s4_subgroup(P: PolytopeSpec) -> SymmetryGroup:
    elements = [coordinate_permutation(p, P) for p in itertools.permutations(range(4))]
    generators = [
        coordinate_permutation(p, P) for p in ((1, 0, 2, 3), (0, 2, 1, 3), (0, 1, 3, 2))
    ]
    return SymmetryGroup(len(P), generators, sorted(set(elements), key=lambda p: p.mapping))


@dataclass
class SymmetryReport:
    order: int
    generators: List[str]
    orbits: List[List[str]]
    kernel: List[str]
    image_order: int
    s4_orbits_type_i: List[List[str]]
    s4_transitive_on_type_i: bool
    reflections_generate: bool

    @property
    def first_isomorphism_holds(self) -> bool:
        return self.order == len(self.kernel) * self.image_order

    def to_dict(self) -> JsonDict:
        return {
            "order": self.order,
            "generators": self.generators,
            "orbits": self.orbits,
            "kernel": self.kernel,
            "image_order": self.image_order,
            "s4_orbits_type_i": self.s4_orbits_type_i,
            "s4_transitive_on_type_i": self.s4_transitive_on_type_i,
            "reflections_generate": self.reflections_generate,
        }


def symmetry_report(P: PolytopeSpec, G: Optional[SymmetryGroup] = None, threads: int = 1) -> SymmetryReport:
    G = G if G is not None else automorphisms(P, threads=threads)
    labels = P.labels

    def named(partition: Partition) -> List[List[str]]:
        return [[labels[i] for i in block] for block in partition]

    kernel = phi_star_kernel(G, P)
    image = phi_star_image(G, P)
    s4_orbits = orbits(s4_subgroup(P), P.indices_of_family(Family.TYPE_I))
    if len(s4_orbits) != 1:
        logger.warning(
            "coordinate permutations are not transitive on type I facets: %s orbits", len(s4_orbits)
        )
    reflections = generated_group(
        [reflection_permutation(u, P) for u in generating_reflections()], len(P)
    )
    return SymmetryReport(
        G.order,
        [g.cycle_notation(labels) for g in G.generators],
        named(orbits(G)),
        [k.cycle_notation(labels) for k in kernel],
        len(image),
        named(s4_orbits),
        len(s4_orbits) == 1,
        reflections.order == G.order and all(g in G for g in reflections.generators),
    )
