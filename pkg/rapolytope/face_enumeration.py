"""
Exact vertex enumeration, face lattice closure, ridge counts and the finite-volume certificate.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx  # type: ignore

from rapolytope._exceptions import (
    CertificateDisagreementError,
    InfiniteVolumeError,
)
from rapolytope._models import VertexRecord
from rapolytope._reports import VertexList
from rapolytope._typing import FacetIndexSet, JsonDict
from rapolytope._utils import map_in_threads
from rapolytope.constants import PositionKind, VertexKind
from rapolytope.exact_lorentz import (
    ONE,
    LorentzVector,
    identity_matrix,
    is_positive_semidefinite,
    lorentz_inner,
    lorentz_norm,
    normalize_ray,
    rank,
    solve_kernel,
)
from rapolytope.polytope_core import PolytopeSpec, require_right_angled

logger = getLogger("rapolytope.faces")

RayKey = Tuple[Tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class VertexRay:
    direction: LorentzVector
    kind: VertexKind
    incident_facets: FacetIndexSet

    @property
    def sort_key(self) -> RayKey:
        return tuple((c.rat_part, c.root2_part) for c in self.direction)

    def to_record(self, P: PolytopeSpec) -> VertexRecord:
        labels = [P.facets[i].label for i in sorted(self.incident_facets)]
        return VertexRecord(self.direction.to_strings(), self.kind.value, labels, len(labels))


@dataclass(frozen=True)
class Face:
    """
    A closed facet set together with the vertices it contains.
    """

    facets: FacetIndexSet
    vertices: FrozenSet[int]
    dimension: int


@dataclass
class FaceLattice:
    d: int
    faces: Dict[int, List[Face]]

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.faces.get(k, [])) for k in range(self.d))

    def faces_of_facet(self, facet_index: int, dimension: int) -> List[Face]:
        return [face for face in self.faces.get(dimension, []) if facet_index in face.facets]


@dataclass
class VolumeCertificate:
    finite_volume: bool
    method_combinatorial: bool
    method_ray_oracle: bool
    ideal_vertex_count: int
    finite_vertex_count: int
    failures: List[JsonDict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.finite_volume

    def to_dict(self) -> JsonDict:
        return {
            "finite_volume": self.finite_volume,
            "method_combinatorial": self.method_combinatorial,
            "method_ray_oracle": self.method_ray_oracle,
            "ideal_vertex_count": self.ideal_vertex_count,
            "finite_vertex_count": self.finite_vertex_count,
            "failures": self.failures,
        }


def _restrict_kernel(
    kernel: Sequence[LorentzVector], v: LorentzVector
) -> Optional[List[LorentzVector]]:
    """
    Cuts the common orthogonal complement down by one more normal.
    Returns None when v is already in the span of the chosen normals.
    """
    products = [lorentz_inner(k, v) for k in kernel]
    pivot = next((i for i, c in enumerate(products) if not c.is_zero()), None)
    if pivot is None:
        return None
    head = products[pivot]
    restricted = []
    for i, (k, c) in enumerate(zip(kernel, products)):
        if i == pivot:
            continue
        restricted.append(k if c.is_zero() else k - kernel[pivot].scale(c / head))
    return restricted


def _vertex_from_direction(P: PolytopeSpec, x: LorentzVector) -> Optional[VertexRay]:
    norm = lorentz_norm(x)
    if norm.sign() > 0:
        return None
    if x[-1].sign() < 0:
        x = -x
    incident = []
    for j, v in enumerate(P.vectors):
        sign = lorentz_inner(x, v).sign()
        if sign > 0:
            return None
        if sign == 0:
            incident.append(j)
    kind = VertexKind.IDEAL if norm.is_zero() else VertexKind.FINITE
    return VertexRay(normalize_ray(x), kind, frozenset(incident))


def _subgram_is_psd(P: PolytopeSpec, chosen: Sequence[int]) -> bool:
    gram = P.gram
    return is_positive_semidefinite([[gram[i][j] for j in chosen] for i in chosen])


def _search_from(P: PolytopeSpec, first: int) -> Dict[LorentzVector, VertexRay]:
    """
    Depth-first search over index-increasing d-subsets starting at `first`, pruned by
    linear dependence and by a non positive semidefinite Gram block.
    """
    found: Dict[LorentzVector, VertexRay] = {}
    vectors = P.vectors
    n = len(vectors)
    # 2x2 blocks with |<v, w>| > 1 are indefinite
    compatible = [[abs(value) <= ONE for value in row] for row in P.gram]
    start = _restrict_kernel(
        [LorentzVector(row) for row in identity_matrix(P.d + 1)], vectors[first]
    )
    assert start is not None

    def extend(chosen: List[int], kernel: List[LorentzVector]) -> None:
        if len(chosen) == P.d:
            vertex = _vertex_from_direction(P, kernel[0])
            if vertex is not None:
                found.setdefault(vertex.direction, vertex)
            return
        needed = P.d - len(chosen)
        for j in range(chosen[-1] + 1, n - needed + 1):
            if not all(compatible[i][j] for i in chosen):
                continue
            restricted = _restrict_kernel(kernel, vectors[j])
            if restricted is None:
                continue
            candidate = chosen + [j]
            if not _subgram_is_psd(P, candidate):
                continue
            extend(candidate, restricted)

    extend([first], start)
    return found


def _exhaustive_from(P: PolytopeSpec, first: int) -> Dict[LorentzVector, VertexRay]:
    found: Dict[LorentzVector, VertexRay] = {}
    vectors = P.vectors
    for rest in itertools.combinations(range(first + 1, len(vectors)), P.d - 1):
        kernel = solve_kernel([vectors[first]] + [vectors[j] for j in rest])
        if len(kernel) != 1:
            continue
        vertex = _vertex_from_direction(P, kernel[0])
        if vertex is not None:
            found.setdefault(vertex.direction, vertex)
    return found


def enumerate_vertices(
    P: PolytopeSpec, threads: int = 1, exhaustive: bool = False
) -> List[VertexRay]:
    """
    Finite and ideal vertices of P, sorted by their canonical ray.

    :param P: the polytope
    :param threads: worker threads, subsets are partitioned by their first facet
    :param exhaustive: solve every d-subset with solve_kernel instead of the pruned search
    :return: the deduplicated vertices with incident sets recomputed against every facet
    """
    search = _exhaustive_from if exhaustive else _search_from
    firsts = list(range(len(P) - P.d + 1))
    logger.info(
        "enumerating vertices of a %s-facet polytope (%s search, %s threads)",
        len(P),
        "exhaustive" if exhaustive else "pruned",
        threads,
    )
    merged: Dict[LorentzVector, VertexRay] = {}
    for partial in map_in_threads(lambda i: search(P, i), firsts, threads):
        for direction, vertex in partial.items():
            merged.setdefault(direction, vertex)
    vertices = sorted(merged.values(), key=lambda vertex: vertex.sort_key)
    logger.info(
        "found %s vertices (%s ideal)",
        len(vertices),
        sum(1 for vertex in vertices if vertex.kind is VertexKind.IDEAL),
    )
    return vertices


def vertex_report(P: PolytopeSpec, vertices: Iterable[VertexRay]) -> VertexList:
    return VertexList(vertex.to_record(P) for vertex in vertices)


def ridge_count(P: PolytopeSpec, facet_index: int) -> int:
    """
    Number of facets meeting the given facet. In a right-angled polytope each such meeting is a ridge.
    """
    P.facet(facet_index)
    require_right_angled(P)
    row = P.positions[facet_index]
    return sum(1 for kind in row if kind is PositionKind.INTERSECTING)


def closure(facets: Iterable[int], vertices: Sequence[VertexRay]) -> Tuple[FacetIndexSet, FrozenSet[int]]:
    """
    The facets common to every vertex containing the given facets, and those vertices.
    """
    wanted = frozenset(facets)
    containing = frozenset(
        i for i, vertex in enumerate(vertices) if wanted <= vertex.incident_facets
    )
    if not containing:
        return wanted, containing
    common = frozenset.intersection(*(vertices[i].incident_facets for i in containing))
    return common, containing


def face_lattice(P: PolytopeSpec, vertices: Optional[Sequence[VertexRay]] = None) -> FaceLattice:
    """
    Proper faces of P as closed facet sets. Every face of a finite-volume polytope contains
    a vertex, so subsets of vertex incident sets reach all of them.
    """
    if vertices is None:
        vertices = enumerate_vertices(P)
    seen: Set[FacetIndexSet] = set()
    faces: Dict[int, List[Face]] = {k: [] for k in range(P.d)}
    for vertex in vertices:
        incident = sorted(vertex.incident_facets)
        for size in range(1, len(incident) + 1):
            for subset in itertools.combinations(incident, size):
                facets, containing = closure(subset, vertices)
                if facets in seen:
                    continue
                seen.add(facets)
                dimension = P.d - rank([P.vectors[i] for i in facets])
                if 0 <= dimension < P.d:
                    faces[dimension].append(Face(facets, containing, dimension))
    for k in faces:
        faces[k].sort(key=lambda face: sorted(face.facets))
    logger.debug("face lattice sizes %s", {k: len(v) for k, v in faces.items()})
    return FaceLattice(P.d, faces)


def _orthogonality_graph(P: PolytopeSpec) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(P)))
    gram = P.gram
    for i, j in itertools.combinations(range(len(P)), 2):
        if gram[i][j].is_zero():
            graph.add_edge(i, j)
    return graph


def _parabolic_completions(P: PolytopeSpec, clique: Sequence[int]) -> List[Tuple[int, ...]]:
    gram = P.gram
    n = len(P)
    minus_one = -ONE
    candidates = []
    for i, s in enumerate(clique):
        others = [t for k, t in enumerate(clique) if k != i]
        candidates.append(
            [
                t
                for t in range(n)
                if gram[s][t] == minus_one and all(gram[t][o].is_zero() for o in others)
            ]
        )
    completions: List[Tuple[int, ...]] = []

    def pick(position: int, chosen: List[int]) -> None:
        if position == len(candidates):
            completions.append(tuple(chosen))
            return
        for t in candidates[position]:
            if all(gram[t][c].is_zero() for c in chosen):
                pick(position + 1, chosen + [t])

    pick(0, [])
    return completions


def _box_link_failures(P: PolytopeSpec, vertices: Sequence[VertexRay]) -> List[JsonDict]:
    gram = P.gram
    failures = []
    for vertex in vertices:
        if vertex.kind is not VertexKind.IDEAL:
            continue
        incident = sorted(vertex.incident_facets)
        ok = len(incident) == 2 * (P.d - 1)
        for i in incident:
            partners = [j for j in incident if j != i and gram[i][j] == -ONE]
            rest = [j for j in incident if j != i and j not in partners]
            if len(partners) != 1 or any(not gram[i][j].is_zero() for j in rest):
                ok = False
        if not ok:
            failures.append(
                {
                    "method": "combinatorial",
                    "reason": "ideal vertex link is not a box",
                    "vertex": vertex.direction.to_strings(),
                    "facets": [P.facets[i].label for i in incident],
                }
            )
    return failures


def _combinatorial_method(
    P: PolytopeSpec, vertices: Sequence[VertexRay]
) -> Tuple[bool, List[JsonDict]]:
    graph = _orthogonality_graph(P)
    failures: List[JsonDict] = []
    extensions_seen = 0
    checked = 0
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) < P.d - 1:
            continue
        if len(clique) > P.d - 1:
            break
        checked += 1
        members = set(clique)
        elliptic = sum(
            1
            for t in graph.nodes
            if t not in members and all(graph.has_edge(t, s) for s in clique)
        )
        parabolic = len(_parabolic_completions(P, clique))
        extensions_seen += elliptic + parabolic
        if elliptic + parabolic != 2:
            failures.append(
                {
                    "method": "combinatorial",
                    "reason": "rank d-1 elliptic subdiagram does not extend in exactly two ways",
                    "facets": [P.facets[i].label for i in sorted(clique)],
                    "elliptic_extensions": elliptic,
                    "parabolic_extensions": parabolic,
                }
            )
    if checked == 0 or extensions_seen == 0:
        failures.append(
            {"method": "combinatorial", "reason": "no elliptic subdiagram of rank d-1 extends"}
        )
    failures.extend(_box_link_failures(P, vertices))
    logger.debug("combinatorial method checked %s cliques", checked)
    return not failures, failures


def _ray_oracle_method(
    P: PolytopeSpec, vertices: Sequence[VertexRay]
) -> Tuple[bool, List[JsonDict]]:
    if not vertices:
        return False, [{"method": "ray_oracle", "reason": "no vertices"}]
    gram = P.gram
    failures: List[JsonDict] = []
    edges: Set[FacetIndexSet] = set()
    for vertex in vertices:
        for subset in itertools.combinations(sorted(vertex.incident_facets), P.d - 1):
            if any(not gram[i][j].is_zero() for i, j in itertools.combinations(subset, 2)):
                continue
            if rank([P.vectors[i] for i in subset]) == P.d - 1:
                edges.add(frozenset(subset))
    for edge in sorted(edges, key=sorted):
        _, containing = closure(edge, vertices)
        if len(containing) != 2:
            failures.append(
                {
                    "method": "ray_oracle",
                    "reason": "edge does not have exactly two vertices",
                    "facets": [P.facets[i].label for i in sorted(edge)],
                    "vertex_count": len(containing),
                }
            )
    logger.debug("ray oracle checked %s edges", len(edges))
    return not failures, failures


def finite_volume_certificate(
    P: PolytopeSpec, vertices: Optional[Sequence[VertexRay]] = None, threads: int = 1
) -> VolumeCertificate:
    """
    Decides finite volume twice, from the Coxeter diagram and from the vertex set.
    Raises CertificateDisagreementError when the two verdicts differ.
    """
    require_right_angled(P)
    if vertices is None:
        vertices = enumerate_vertices(P, threads=threads)
    if not P.spans():
        # the polytope contains a whole line, so its volume is infinite
        failures = [
            {"method": method, "reason": "facet normals do not span R^{d,1}"}
            for method in ("combinatorial", "ray_oracle")
        ]
        ideal = sum(1 for vertex in vertices if vertex.kind is VertexKind.IDEAL)
        return VolumeCertificate(False, False, False, ideal, len(vertices) - ideal, failures)
    combinatorial, combinatorial_failures = _combinatorial_method(P, vertices)
    ray_oracle, ray_failures = _ray_oracle_method(P, vertices)
    failures = combinatorial_failures + ray_failures
    if combinatorial != ray_oracle:
        raise CertificateDisagreementError(combinatorial, ray_oracle, failures)
    ideal = sum(1 for vertex in vertices if vertex.kind is VertexKind.IDEAL)
    logger.info("finite volume: %s", combinatorial)
    return VolumeCertificate(
        combinatorial, combinatorial, ray_oracle, ideal, len(vertices) - ideal, failures
    )


def f_vector(
    P: PolytopeSpec,
    vertices: Optional[Sequence[VertexRay]] = None,
    certificate: Optional[VolumeCertificate] = None,
) -> Tuple[int, ...]:
    """
    Number of k-faces for k = 0..d-1.
    """
    if vertices is None:
        vertices = enumerate_vertices(P)
    if certificate is None:
        certificate = finite_volume_certificate(P, vertices)
    if not certificate.finite_volume:
        raise InfiniteVolumeError("f_vector needs a polytope of finite volume")
    return face_lattice(P, vertices).f_vector()


def ideal_vertices(vertices: Iterable[VertexRay]) -> List[VertexRay]:
    return [vertex for vertex in vertices if vertex.kind is VertexKind.IDEAL]


def is_vertex_direction(P: PolytopeSpec, x: LorentzVector) -> bool:
    """
    True when x spans a vertex ray of P: non-space-like, inside every half-space and
    incident to facets of full rank d.
    """
    if x.is_zero():
        return False
    vertex = _vertex_from_direction(P, x)
    if vertex is None:
        return False
    return rank([P.vectors[i] for i in vertex.incident_facets]) == P.d
