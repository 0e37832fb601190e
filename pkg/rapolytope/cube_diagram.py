"""
The boundary complex of the 4-cube, built from sign vectors, and the map sending each facet of
the built-in polytope to a cube or an edge of it. Mutual positions of facets are predicted from
the incidence of their images alone and compared with the exact geometry.
"""
import itertools
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from rapolytope._exceptions import FamilyTagError
from rapolytope._models import PairCheckRecord
from rapolytope._reports import PairCheckList
from rapolytope._typing import JsonDict
from rapolytope._utils import map_in_threads
from rapolytope.constants import Family, Incidence, PositionKind
from rapolytope.polytope_core import FacetNormal, PolytopeSpec, mutual_position

logger = getLogger("rapolytope.cubes")

CUBE_DIMENSION = 4
_FACE_NAMES = {3: "cube", 2: "quadrilateral", 1: "edge", 0: "vertex"}


@dataclass(frozen=True)
class CubeFace:
    """
    A face of the boundary of [-1, 1]^4: the nonzero entries fix coordinates, the zero entries are free.
    """

    sign_vector: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sign_vector) != CUBE_DIMENSION:
            raise FamilyTagError(
                f"A cube face needs {CUBE_DIMENSION} signs, got {self.sign_vector}"
            )
        if any(s not in (-1, 0, 1) for s in self.sign_vector):
            raise FamilyTagError(f"Sign vector entries must be -1, 0 or 1: {self.sign_vector}")
        if not any(self.sign_vector):
            raise FamilyTagError("The zero sign vector is not a boundary face")

    @property
    def dim(self) -> int:
        return CUBE_DIMENSION - len(self.support)

    @property
    def kind(self) -> str:
        return _FACE_NAMES[self.dim]

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, s in enumerate(self.sign_vector) if s != 0)

    def contains(self, other: "CubeFace") -> bool:
        return self.support <= other.support and all(
            self.sign_vector[i] == other.sign_vector[i] for i in self.support
        )

    def vertices(self) -> Iterator[Tuple[int, ...]]:
        free = [i for i, s in enumerate(self.sign_vector) if s == 0]
        for signs in itertools.product((1, -1), repeat=len(free)):
            vertex = list(self.sign_vector)
            for i, s in zip(free, signs):
                vertex[i] = s
            yield tuple(vertex)

    def __str__(self) -> str:
        return "{}({})".format(self.kind, ",".join(str(s) for s in self.sign_vector))


def _sign_vector(f: FacetNormal) -> Tuple[int, ...]:
    signs = []
    for c in f.a_projection:
        if not c.is_rational() or c.rat_part not in (-1, 0, 1):
            raise FamilyTagError(f"{f.label} does not project to a sign vector")
        signs.append(int(c.rat_part))
    return tuple(signs)


def phi(f: FacetNormal) -> CubeFace:
    """
    Type I and type II facets go to the cube a(v), type III facets go to the edge a(v).
    """
    if f.family is Family.OTHER:
        raise FamilyTagError(f"{f.label} has no family tag")
    face = CubeFace(_sign_vector(f))
    expected_dim = 1 if f.family is Family.TYPE_III else 3
    if face.dim != expected_dim:
        raise FamilyTagError(
            f"{f.label} is tagged {f.family.value} but a(v) is a {face.kind}"
        )
    return face


def _common_vertex(a: CubeFace, b: CubeFace) -> bool:
    return all(
        x == y or x == 0 or y == 0 for x, y in zip(a.sign_vector, b.sign_vector)
    )


def incidence(a: CubeFace, b: CubeFace) -> Incidence:
    if a.contains(b) or b.contains(a):
        return Incidence.CONTAINED_IN
    if a.dim == 3 and b.dim == 3:
        return Incidence.INTERSECT if not a.support & b.support else Incidence.DISJOINT
    if a.dim == 1 and b.dim == 1:
        if a.support == b.support:
            differing = sum(1 for x, y in zip(a.sign_vector, b.sign_vector) if x != y)
            if differing == 1:
                return Incidence.OPPOSITE_IN_QUADRILATERAL
        return Incidence.MEET_AT_VERTEX if _common_vertex(a, b) else Incidence.OTHER
    return Incidence.MEET_AT_VERTEX if _common_vertex(a, b) else Incidence.DISJOINT


_SAME_SIDE = {
    Incidence.INTERSECT: PositionKind.INTERSECTING,
    Incidence.DISJOINT: PositionKind.PARALLEL,
}
_CROSS_SIDE = {
    Incidence.CONTAINED_IN: PositionKind.INTERSECTING,
    Incidence.INTERSECT: PositionKind.PARALLEL,
    Incidence.DISJOINT: PositionKind.ULTRAPARALLEL,
}
_CUBE_EDGE = {
    Incidence.CONTAINED_IN: PositionKind.INTERSECTING,
    Incidence.MEET_AT_VERTEX: PositionKind.PARALLEL,
    Incidence.DISJOINT: PositionKind.ULTRAPARALLEL,
}
_EDGE_EDGE = {
    Incidence.MEET_AT_VERTEX: PositionKind.INTERSECTING,
    Incidence.OPPOSITE_IN_QUADRILATERAL: PositionKind.PARALLEL,
    Incidence.OTHER: PositionKind.ULTRAPARALLEL,
}


def _case_table(f: FacetNormal, g: FacetNormal) -> Dict[Incidence, PositionKind]:
    families = {f.family, g.family}
    if Family.OTHER in families:
        raise FamilyTagError(f"Can't predict {f.label}, {g.label} without family tags")
    if families == {Family.TYPE_III}:
        return _EDGE_EDGE
    if Family.TYPE_III in families:
        return _CUBE_EDGE
    if len(families) == 1:
        return _SAME_SIDE
    return _CROSS_SIDE


def predict_position(f: FacetNormal, g: FacetNormal) -> PositionKind:
    """
    Mutual position read off from the cube complex, without Lorentzian arithmetic.
    """
    table = _case_table(f, g)
    relation = incidence(phi(f), phi(g))
    try:
        return table[relation]
    except KeyError:
        raise FamilyTagError(
            f"No prediction for {f.label} ({f.family.value}) and {g.label} "
            f"({g.family.value}) with incidence {relation.value}"
        ) from None


@dataclass
class PositionCheckReport:
    pairs: int
    records: PairCheckList = field(default_factory=PairCheckList)

    @property
    def mismatches(self) -> PairCheckList:
        return self.records.disagreements()

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> JsonDict:
        return {"pairs": self.pairs, "mismatches": self.mismatches.to_dicts()}


def _check_pair(P: PolytopeSpec, i: int, j: int) -> PairCheckRecord:
    f, g = P.facets[i], P.facets[j]
    relation = incidence(phi(f), phi(g))
    predicted = predict_position(f, g)
    actual = mutual_position(f, g).kind
    return PairCheckRecord(
        f.label,
        g.label,
        f"{f.family.value}x{g.family.value}",
        relation.value,
        predicted.value,
        actual.value,
        predicted is actual,
    )


def verify_position_predictions(P: PolytopeSpec, threads: int = 1) -> PositionCheckReport:
    """
    Compares predict_position with mutual_position on every unordered pair of facets.

    :param P: a polytope whose facets all carry family tags
    :param threads: worker threads, one work item per first facet
    :return: every pair record, mismatches available through the report
    """
    n = len(P)

    def _row(i: int) -> List[PairCheckRecord]:
        return [_check_pair(P, i, j) for j in range(i + 1, n)]

    records = PairCheckList(
        record for row in map_in_threads(_row, list(range(n)), threads) for record in row
    )
    report = PositionCheckReport(len(records), records)
    logger.info("checked %s pairs, %s mismatches", report.pairs, len(report.mismatches))
    return report


def cubes() -> List[CubeFace]:
    faces = []
    for axis in range(CUBE_DIMENSION):
        for sign in (1, -1):
            signs = [0] * CUBE_DIMENSION
            signs[axis] = sign
            faces.append(CubeFace(tuple(signs)))
    return faces


def edges() -> List[CubeFace]:
    faces = []
    for zero_position in range(CUBE_DIMENSION):
        for signs in itertools.product((1, -1), repeat=CUBE_DIMENSION - 1):
            vector = list(signs)
            vector.insert(zero_position, 0)
            faces.append(CubeFace(tuple(vector)))
    return faces


def phi_fibres(P: PolytopeSpec) -> Dict[CubeFace, List[int]]:
    fibres: Dict[CubeFace, List[int]] = {}
    for i, facet in enumerate(P.facets):
        fibres.setdefault(phi(facet), []).append(i)
    return fibres


def cube_symmetries(faces: Optional[Sequence[CubeFace]] = None) -> List[Tuple[int, ...]]:
    """
    Permutations of the 8 cubes that preserve which pairs intersect and which are disjoint.
    """
    faces = list(faces) if faces is not None else cubes()
    relation = {
        (i, j): incidence(faces[i], faces[j])
        for i, j in itertools.permutations(range(len(faces)), 2)
    }
    found = []
    for permutation in itertools.permutations(range(len(faces))):
        if all(
            relation[(permutation[i], permutation[j])] is kind
            for (i, j), kind in relation.items()
        ):
            found.append(permutation)
    logger.debug("%s cube symmetries", len(found))
    return found
