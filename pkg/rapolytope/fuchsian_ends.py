"""
Sets of pairwise disjoint facets, the reflection groups left after removing them and an audit of
how each remaining facet is pinned down by the facets that stay fixed.
"""
import itertools
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx  # type: ignore

from rapolytope._exceptions import InvalidSelectionError
from rapolytope._models import DeterminationRecord, SelectionRecord
from rapolytope._reports import DeterminationList, SelectionList
from rapolytope._typing import FacetIndexSet, JsonDict
from rapolytope._utils import map_in_threads
from rapolytope.constants import AuditStrategy, DisjointMode, Family, PositionKind
from rapolytope.exact_lorentz import rank
from rapolytope.polytope_core import CoxeterPresentation, PolytopeSpec, coxeter_presentation
from rapolytope.symmetry import SymmetryGroup, automorphisms, closure

logger = getLogger("rapolytope.ends")

_DISJOINT_KINDS = {
    DisjointMode.STRICT: frozenset([PositionKind.ULTRAPARALLEL]),
    DisjointMode.WEAK: frozenset([PositionKind.ULTRAPARALLEL, PositionKind.PARALLEL]),
}


def are_disjoint(P: PolytopeSpec, i: int, j: int, mode: DisjointMode) -> bool:
    return i != j and P.positions[i][j] in _DISJOINT_KINDS[mode]


def selection_conflicts(
    P: PolytopeSpec, removed: Iterable[int], mode: DisjointMode
) -> List[Tuple[str, str]]:
    """
    Pairs of the given facets that are not disjoint under the mode.
    """
    return [
        (P.facets[i].label, P.facets[j].label)
        for i, j in itertools.combinations(sorted(removed), 2)
        if not are_disjoint(P, i, j, mode)
    ]


@dataclass(frozen=True)
class FacetSelection:
    removed: FacetIndexSet
    mode: DisjointMode = DisjointMode.STRICT
    orbit: Optional[int] = field(default=None, compare=False)

    def labels(self, P: PolytopeSpec) -> List[str]:
        return [P.facets[i].label for i in sorted(self.removed)]

    def validate(self, P: PolytopeSpec) -> "FacetSelection":
        for i in self.removed:
            P.facet(i)
        conflicts = selection_conflicts(P, self.removed, self.mode)
        if conflicts:
            raise InvalidSelectionError(conflicts[0], self.mode.value)
        return self

    def to_record(self, P: PolytopeSpec) -> SelectionRecord:
        return SelectionRecord(
            len(self.removed),
            self.labels(P),
            -1 if self.orbit is None else self.orbit,
            self.mode.value,
        )


def selection_from_labels(
    P: PolytopeSpec, labels: Iterable[str], mode: DisjointMode = DisjointMode.STRICT
) -> FacetSelection:
    return FacetSelection(frozenset(P.index_of(label) for label in labels), mode).validate(P)


def disjointness_graph(P: PolytopeSpec, mode: DisjointMode = DisjointMode.STRICT) -> nx.Graph:
    graph = nx.Graph()
    for i, facet in enumerate(P.facets):
        graph.add_node(i, label=facet.label)
    for i, j in itertools.combinations(range(len(P)), 2):
        if are_disjoint(P, i, j, mode):
            graph.add_edge(i, j)
    return graph


def _canonical_image(G: SymmetryGroup, removed: FacetIndexSet) -> Tuple[int, ...]:
    assert G.elements is not None
    return min(tuple(sorted(sigma(i) for i in removed)) for sigma in G.elements)


def maximal_disjoint_sets(
    P: PolytopeSpec,
    mode: DisjointMode = DisjointMode.STRICT,
    G: Optional[SymmetryGroup] = None,
    threads: int = 1,
) -> List[FacetSelection]:
    """
    Every inclusion-maximal set of pairwise disjoint facets, sorted by size then indices.
    Each set carries the index of its orbit under the symmetry group.

    :param P: the polytope
    :param mode: STRICT counts only ultraparallel pairs as disjoint, WEAK also parallel pairs
    :param G: symmetry group used for orbit tagging, computed when omitted
    :param threads: worker threads for the orbit tagging
    :return: the maximal selections
    """
    graph = disjointness_graph(P, mode)
    cliques = sorted(
        {frozenset(clique) for clique in nx.find_cliques(graph)},
        key=lambda s: (len(s), sorted(s)),
    )
    logger.info("%s maximal disjoint sets in %s mode", len(cliques), mode.value)
    if G is None:
        G = automorphisms(P, threads=threads)
    if G.elements is None:
        G.elements = closure(G.generators, G.degree)
    canonical = map_in_threads(lambda s: _canonical_image(G, s), cliques, threads)
    representatives = sorted(set(canonical), key=lambda c: (len(c), c))
    orbit_of = {c: k for k, c in enumerate(representatives)}
    return [
        FacetSelection(clique, mode, orbit_of[c]) for clique, c in zip(cliques, canonical)
    ]


def is_maximal(P: PolytopeSpec, selection: FacetSelection) -> bool:
    return all(
        any(not are_disjoint(P, g, i, selection.mode) for i in selection.removed)
        for g in range(len(P))
        if g not in selection.removed
    )


@dataclass
class CensusReport:
    mode: DisjointMode
    selections: List[FacetSelection]
    labels: List[str]

    @property
    def count(self) -> int:
        return len(self.selections)

    def orbit_sizes(self) -> Dict[int, int]:
        sizes: Dict[int, int] = {}
        for selection in self.selections:
            if selection.orbit is not None:
                sizes[selection.orbit] = sizes.get(selection.orbit, 0) + 1
        return sizes

    def representatives(self) -> Dict[int, List[str]]:
        found: Dict[int, List[str]] = {}
        for selection in self.selections:
            if selection.orbit is not None and selection.orbit not in found:
                found[selection.orbit] = [self.labels[i] for i in sorted(selection.removed)]
        return found

    def to_selection_list(self, P: PolytopeSpec) -> SelectionList:
        return SelectionList(selection.to_record(P) for selection in self.selections)

    def to_dict(self) -> JsonDict:
        sizes = self.orbit_sizes()
        return {
            "mode": self.mode.value,
            "maximal_set_count": self.count,
            "orbit_count": len(sizes),
            "orbits": [
                {"orbit": k, "representative": rep, "size": sizes[k]}
                for k, rep in sorted(self.representatives().items())
            ],
        }


def census(
    P: PolytopeSpec,
    mode: DisjointMode = DisjointMode.STRICT,
    G: Optional[SymmetryGroup] = None,
    threads: int = 1,
) -> CensusReport:
    return CensusReport(mode, maximal_disjoint_sets(P, mode, G, threads), P.labels)


@dataclass
class EndsPresentation:
    presentation: CoxeterPresentation
    boundary: List[str]

    def to_dict(self) -> JsonDict:
        data = self.presentation.to_dict()
        data["boundary"] = self.boundary
        return data


def ends_presentation(P: PolytopeSpec, F: FacetSelection) -> EndsPresentation:
    """
    The reflection group on the facets outside F; the facets of F become totally geodesic boundary.
    """
    F.validate(P)
    remaining = [i for i in range(len(P)) if i not in F.removed]
    return EndsPresentation(coxeter_presentation(P.subset(remaining)), F.labels(P))


@dataclass
class DeterminationReport:
    removed: List[str]
    mode: DisjointMode
    strategy: AuditStrategy
    records: DeterminationList = field(default_factory=DeterminationList)
    conflicts: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def all_determined(self) -> bool:
        return all(record.determined for record in self.records)

    @property
    def tangency_targets(self) -> List[str]:
        return [record.target for record in self.records if record.used_tangency]

    def record_for(self, label: str) -> DeterminationRecord:
        for record in self.records:
            if record.target == label:
                return record
        raise KeyError(label)

    def to_dict(self) -> JsonDict:
        return {
            "removed": self.removed,
            "mode": self.mode.value,
            "strategy": self.strategy.value,
            "all_determined": self.all_determined,
            "conflicts": [list(pair) for pair in self.conflicts],
            "records": self.records.to_dicts(),
        }


_Outcome = Tuple[Tuple[int, ...], Tuple[int, ...], int]


class DeterminationAuditor:
    """
    Decides, for each facet outside a removed set, whether the fixed type I and type II walls pin
    its normal down through orthogonality, with tangency to parallel walls as a flagged fallback.

    Results only depend on the target and on which walls are removed, so they are memoized on that.
    """

    def __init__(self, P: PolytopeSpec, strategy: AuditStrategy = AuditStrategy.GREEDY):
        self.P = P
        self.strategy = strategy
        self.walls = P.indices_of_family(Family.TYPE_I, Family.TYPE_II)
        self._partner = self._same_cube_partners()
        self._cache: Dict[Tuple[int, FrozenSet[int]], _Outcome] = {}

    def _same_cube_partners(self) -> Dict[int, int]:
        by_cube: Dict[Tuple[str, ...], List[int]] = {}
        for i in self.walls:
            key = tuple(str(c) for c in self.P.facets[i].a_projection)
            by_cube.setdefault(key, []).append(i)
        partners = {}
        for pair in by_cube.values():
            if len(pair) == 2:
                partners[pair[0]], partners[pair[1]] = pair[1], pair[0]
        return partners

    def anchors(self, target: int, removed_walls: FrozenSet[int]) -> List[int]:
        disabled = set(removed_walls)
        if self.strategy is AuditStrategy.CUBE_PAIRED and target not in self.walls:
            disabled |= {self._partner[i] for i in removed_walls if i in self._partner}
        return [i for i in self.walls if i != target and i not in disabled]

    def _solve(self, target: int, removed_walls: FrozenSet[int]) -> _Outcome:
        key = (target, removed_walls)
        if key in self._cache:
            return self._cache[key]
        P = self.P
        positions = P.positions[target]
        anchors = self.anchors(target, removed_walls)
        orthogonal = tuple(i for i in anchors if P.gram[target][i].is_zero())
        rows = [P.vectors[i] for i in orthogonal]
        current = rank(rows) if rows else 0
        tangent: List[int] = []
        for i in anchors:
            if current >= P.d:
                break
            if positions[i] is not PositionKind.PARALLEL:
                continue
            candidate = rank(rows + [P.vectors[i]])
            if candidate > current:
                rows.append(P.vectors[i])
                tangent.append(i)
                current = candidate
        outcome = (orthogonal, tuple(tangent), current)
        self._cache[key] = outcome
        return outcome

    def audit(self, F: FacetSelection) -> DeterminationReport:
        P = self.P
        conflicts = selection_conflicts(P, F.removed, F.mode)
        if conflicts:
            logger.warning("removed set is not pairwise disjoint: %s", conflicts)
        removed_walls = frozenset(i for i in F.removed if i in self.walls)
        order = self.walls + [i for i in range(len(P)) if i not in self.walls]
        records = DeterminationList()
        for target in order:
            if target in F.removed:
                continue
            orthogonal, tangent, constraint_rank = self._solve(target, removed_walls)
            records.append(
                DeterminationRecord(
                    P.facets[target].label,
                    F.labels(P),
                    [P.facets[i].label for i in orthogonal],
                    [P.facets[i].label for i in tangent],
                    constraint_rank,
                    bool(tangent),
                    constraint_rank >= P.d,
                )
            )
        return DeterminationReport(F.labels(P), F.mode, self.strategy, records, conflicts)


def determination_audit(
    P: PolytopeSpec,
    F: FacetSelection,
    strategy: AuditStrategy = AuditStrategy.GREEDY,
) -> DeterminationReport:
    return DeterminationAuditor(P, strategy).audit(F)


def audit_all(
    P: PolytopeSpec,
    selections: Sequence[FacetSelection],
    strategy: AuditStrategy = AuditStrategy.GREEDY,
) -> List[DeterminationReport]:
    auditor = DeterminationAuditor(P, strategy)
    return [auditor.audit(F) for F in selections]
