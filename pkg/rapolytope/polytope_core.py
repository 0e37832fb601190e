"""
Polytopes given by outward unit normals, the built-in 48-facet polytope P, mutual positions,
right-angledness and the Coxeter presentation of the reflection group.
"""
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from logging import getLogger
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from rapolytope._exceptions import (
    DimensionMismatchError,
    FamilyTagError,
    NotRightAngledError,
    PolytopeInputError,
)
from rapolytope._typing import FilePathOrBuffer, IndexPair, JsonDict
from rapolytope._utils import dump_json, get_file_path_or_buffer, load_json, map_in_threads
from rapolytope.constants import DEFAULT_DIMENSION, Family, PositionKind
from rapolytope.exact_lorentz import (
    ONE,
    ZERO,
    ExactScalar,
    LorentzVector,
    Matrix,
    lorentz_inner,
    lorentz_norm,
    rank,
    require_unit,
)

logger = getLogger("rapolytope.core")

AXIS_NAMES = ("X", "Y", "Z", "W")
_FAMILY_RULE_SHIFT = {
    frozenset([Family.TYPE_I]): 0,
    frozenset([Family.TYPE_II]): 0,
    frozenset([Family.TYPE_I, Family.TYPE_II]): -1,
    frozenset([Family.TYPE_I, Family.TYPE_III]): -1,
    frozenset([Family.TYPE_II, Family.TYPE_III]): -1,
    frozenset([Family.TYPE_III]): -2,
}


@dataclass(frozen=True)
class FacetNormal:
    """
    Outward unit normal of one facet together with its label and family tag.
    """

    vector: LorentzVector
    label: str
    family: Family = Family.OTHER
    a_projection: Tuple[ExactScalar, ...] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        require_unit(self.vector, self.label)
        object.__setattr__(self, "a_projection", tuple(self.vector.coords[:4]))

    def to_dict(self) -> JsonDict:
        return {
            "label": self.label,
            "family": self.family.value,
            "vector": self.vector.to_strings(),
        }


@dataclass(frozen=True)
class PolytopeSpec:
    """
    The polytope cut out by the half-spaces <x, v> <= 0 of its facet normals.
    """

    d: int
    facets: Tuple[FacetNormal, ...]

    def __post_init__(self) -> None:
        seen: Set[LorentzVector] = set()
        for facet in self.facets:
            if len(facet.vector) != self.d + 1:
                raise DimensionMismatchError(self.d + 1, len(facet.vector))
            if facet.vector in seen:
                raise PolytopeInputError(f"Duplicate facet normal for {facet.label}")
            seen.add(facet.vector)
        labels = [facet.label for facet in self.facets]
        if len(set(labels)) != len(labels):
            raise PolytopeInputError("Facet labels must be unique")

    def __len__(self) -> int:
        return len(self.facets)

    @property
    def labels(self) -> List[str]:
        return [facet.label for facet in self.facets]

    @property
    def vectors(self) -> List[LorentzVector]:
        return [facet.vector for facet in self.facets]

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {facet.label: i for i, facet in enumerate(self.facets)}

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise PolytopeInputError(f"Unknown facet label {label!r}") from None

    def facet(self, index: int) -> FacetNormal:
        if not 0 <= index < len(self.facets):
            raise PolytopeInputError(
                f"Facet index {index} out of range for {len(self.facets)} facets"
            )
        return self.facets[index]

    def indices_of_family(self, *families: Family) -> List[int]:
        return [i for i, facet in enumerate(self.facets) if facet.family in families]

    @cached_property
    def gram(self) -> Matrix:
        return gram_matrix(self)

    @cached_property
    def positions(self) -> List[List[Optional[PositionKind]]]:
        return [
            [None if i == j else classify_inner(value) for j, value in enumerate(row)]
            for i, row in enumerate(self.gram)
        ]

    def spans(self) -> bool:
        return rank(self.vectors) == self.d + 1

    def subset(self, indices: Iterable[int]) -> "PolytopeSpec":
        return PolytopeSpec(self.d, tuple(self.facets[i] for i in sorted(indices)))


@dataclass(frozen=True)
class MutualPosition:
    kind: PositionKind
    inner: ExactScalar
    cos_angle: Optional[ExactScalar] = None

    def to_dict(self) -> JsonDict:
        return {
            "kind": self.kind.value,
            "inner": str(self.inner),
            "cos_angle": None if self.cos_angle is None else str(self.cos_angle),
        }


@dataclass
class RightAngleCheck:
    """
    Outcome of is_right_angled; truthy when every intersecting pair is orthogonal.
    """

    right_angled: bool
    pairs_checked: int
    counterexample: Optional[Tuple[str, str]] = None
    counterexample_inner: Optional[ExactScalar] = None

    def __bool__(self) -> bool:
        return self.right_angled

    def to_dict(self) -> JsonDict:
        return {
            "right_angled": self.right_angled,
            "pairs_checked": self.pairs_checked,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "counterexample_inner": None
            if self.counterexample_inner is None
            else str(self.counterexample_inner),
        }


@dataclass
class CoxeterPresentation:
    generators: List[str]
    commuting_pairs: List[IndexPair]

    def relations(self) -> List[str]:
        involutions = [f"r_{name}^2" for name in self.generators]
        commutators = [
            f"(r_{self.generators[i]} r_{self.generators[j]})^2"
            for i, j in self.commuting_pairs
        ]
        return involutions + commutators

    def to_dict(self) -> JsonDict:
        return {
            "generators": self.generators,
            "commuting_pairs": [
                [self.generators[i], self.generators[j]] for i, j in self.commuting_pairs
            ],
            "relation_count": len(self.commuting_pairs),
        }


def type_i_label(axis: int, sign: int) -> str:
    return "{}{}".format(AXIS_NAMES[axis], "+" if sign > 0 else "-")


def type_ii_label(axis: int, sign: int) -> str:
    return "S_" + type_i_label(axis, sign)


def type_iii_label(a: Sequence[int]) -> str:
    return "S({})".format(",".join(str(int(x)) for x in a))


def build_polytope_P() -> PolytopeSpec:
    """
    The right-angled 5-polytope with 48 facets: 8 of type I, 8 of type II and 32 of type III.
    Facets are ordered type I, type II, type III; inside a family by axis then sign.
    """
    half = Fraction(1, 2)
    facets: List[FacetNormal] = []
    for axis in range(4):
        for sign in (1, -1):
            a = [0, 0, 0, 0]
            a[axis] = sign
            facets.append(
                FacetNormal(LorentzVector(a + [1, 1]), type_i_label(axis, sign), Family.TYPE_I)
            )
    for axis in range(4):
        for sign in (1, -1):
            a = [0, 0, 0, 0]
            a[axis] = sign
            facets.append(
                FacetNormal(
                    LorentzVector([Fraction(x) for x in a] + [-half, half]),
                    type_ii_label(axis, sign),
                    Family.TYPE_II,
                )
            )
    for zero_position in range(4):
        for signs in itertools.product((1, -1), repeat=3):
            a = list(signs)
            a.insert(zero_position, 0)
            facets.append(
                FacetNormal(
                    LorentzVector([Fraction(x) for x in a] + [half, 3 * half]),
                    type_iii_label(a),
                    Family.TYPE_III,
                )
            )
    logger.debug("built P with %s facets", len(facets))
    return PolytopeSpec(DEFAULT_DIMENSION, tuple(facets))


def classify_inner(inner: ExactScalar) -> PositionKind:
    magnitude = abs(inner)
    if magnitude < ONE:
        return PositionKind.INTERSECTING
    if magnitude == ONE:
        return PositionKind.PARALLEL
    return PositionKind.ULTRAPARALLEL


def mutual_position(f: FacetNormal, g: FacetNormal) -> MutualPosition:
    if f.vector == g.vector:
        raise PolytopeInputError(
            f"mutual_position needs two different facets, got {f.label} twice"
        )
    inner = lorentz_inner(f.vector, g.vector)
    kind = classify_inner(inner)
    cos_angle = -inner if kind is PositionKind.INTERSECTING else None
    return MutualPosition(kind, inner, cos_angle)


def dihedral_angle(f: FacetNormal, g: FacetNormal) -> Optional[float]:
    """
    Angle in radians between two facets: arccos(-<v,w>) when they intersect,
    0 when they are parallel and None when the hyperplanes are ultraparallel.
    """
    position = mutual_position(f, g)
    if position.kind is PositionKind.PARALLEL:
        return 0.0
    if position.cos_angle is None:
        return None
    return math.acos(float(position.cos_angle))


def angle_class(f: FacetNormal, g: FacetNormal) -> str:
    position = mutual_position(f, g)
    if position.kind is PositionKind.PARALLEL:
        return "0"
    if position.kind is PositionKind.ULTRAPARALLEL:
        return "undefined"
    return "pi/2" if position.inner.is_zero() else "other"


def gram_matrix(P: PolytopeSpec, threads: int = 1) -> Matrix:
    vectors = P.vectors
    size = len(vectors)

    def _row(i: int) -> List[ExactScalar]:
        return [
            lorentz_norm(vectors[i]) if i == j else lorentz_inner(vectors[i], vectors[j])
            for j in range(size)
        ]

    return map_in_threads(_row, list(range(size)), threads)


def family_rule_inner(f: FacetNormal, g: FacetNormal) -> ExactScalar:
    """
    Inner product of two built-in normals from their a-projections alone.
    """
    key = frozenset([f.family, g.family])
    if key not in _FAMILY_RULE_SHIFT:
        raise FamilyTagError(
            f"No closed-form inner product rule for families {f.family.value}, {g.family.value}"
        )
    dot = ZERO
    for x, y in zip(f.a_projection, g.a_projection):
        dot = dot + x * y
    return dot + _FAMILY_RULE_SHIFT[key]


def gram_value_set(P: PolytopeSpec) -> Set[ExactScalar]:
    gram = P.gram
    return {gram[i][j] for i in range(len(P)) for j in range(i + 1, len(P))}


def is_right_angled(P: PolytopeSpec) -> RightAngleCheck:
    gram = P.gram
    checked = 0
    for i, j in itertools.combinations(range(len(P)), 2):
        checked += 1
        inner = gram[i][j]
        if classify_inner(inner) is PositionKind.INTERSECTING and not inner.is_zero():
            logger.info(
                "facets %s and %s intersect at a non-right angle (inner %s)",
                P.facets[i].label,
                P.facets[j].label,
                inner,
            )
            return RightAngleCheck(
                False, checked, (P.facets[i].label, P.facets[j].label), inner
            )
    return RightAngleCheck(True, checked)


def require_right_angled(P: PolytopeSpec) -> None:
    check = is_right_angled(P)
    if not check:
        assert check.counterexample is not None
        raise NotRightAngledError(check.counterexample, check.counterexample_inner)


def orthogonal_pairs(P: PolytopeSpec, indices: Optional[Sequence[int]] = None) -> List[IndexPair]:
    chosen = list(range(len(P))) if indices is None else sorted(indices)
    gram = P.gram
    return [(i, j) for i, j in itertools.combinations(chosen, 2) if gram[i][j].is_zero()]


def coxeter_presentation(P: PolytopeSpec) -> CoxeterPresentation:
    """
    One involution per facet and one commuting relation per orthogonally intersecting pair.
    """
    require_right_angled(P)
    return CoxeterPresentation(P.labels, orthogonal_pairs(P))


def polytope_from_dict(data: JsonDict) -> PolytopeSpec:
    try:
        d = int(data["dimension"])
        raw_facets = data["facets"]
    except (KeyError, TypeError, ValueError) as e:
        raise PolytopeInputError(f"Polytope JSON needs 'dimension' and 'facets': {e}") from e
    if not isinstance(raw_facets, list):
        raise PolytopeInputError(f"Polytope JSON 'facets' must be a list, got {type(raw_facets).__name__}")
    families = {family.value: family for family in Family}
    facets = []
    for position, raw in enumerate(raw_facets):
        try:
            label = str(raw.get("label", f"F{position}"))
            family = families[str(raw.get("family", Family.OTHER.value))]
            vector = LorentzVector.from_values(raw["vector"])
        except (KeyError, AttributeError, TypeError, ValueError) as e:
            raise PolytopeInputError(f"Malformed facet #{position}: {e}") from e
        facets.append(FacetNormal(vector, label, family))
    return PolytopeSpec(d, tuple(facets))


def polytope_to_dict(P: PolytopeSpec) -> JsonDict:
    return {"dimension": P.d, "facets": [facet.to_dict() for facet in P.facets]}


def load_polytope(source: Union[FilePathOrBuffer, bytes]) -> PolytopeSpec:
    if isinstance(source, bytes):
        raw = source
    else:
        target = get_file_path_or_buffer(source)
        if isinstance(target, str):
            with open(target, "rb") as file:
                raw = file.read()
        else:
            content: Any = target.read()  # type: ignore
            raw = content.encode() if isinstance(content, str) else content
    try:
        data = load_json(raw)
    except ValueError as e:
        raise PolytopeInputError(f"Polytope input is not valid JSON: {e}") from e
    return polytope_from_dict(data)


def dump_polytope(P: PolytopeSpec) -> bytes:
    return dump_json(polytope_to_dict(P))


def _fixture(d: int, rows: Sequence[Sequence[Union[int, Fraction]]], prefix: str) -> PolytopeSpec:
    return PolytopeSpec(
        d,
        tuple(
            FacetNormal(LorentzVector(row), f"{prefix}{i + 1}") for i, row in enumerate(rows)
        ),
    )


def ideal_triangle() -> PolytopeSpec:
    """
    Three lines in H^2 that are pairwise parallel.
    """
    return _fixture(2, [(1, 0, 0), (-1, 1, 1), (-1, -1, 1)], "T")


def ultraparallel_strip() -> PolytopeSpec:
    """
    Two ultraparallel lines in H^2 bounding a strip of infinite area.
    """
    return _fixture(2, [(1, 0, 0), (-2, 1, 2)], "U")


def right_angled_pentagon() -> PolytopeSpec:
    """
    A compact right-angled pentagon with rational normals.
    """
    F = Fraction
    return _fixture(
        2,
        [
            (1, 0, 0),
            (0, 1, 0),
            (F(-697, 672), 0, F(185, 672)),
            (F(-185, 104), F(-85, 13), F(697, 104)),
            (0, F(-697, 153), F(680, 153)),
        ],
        "E",
    )
