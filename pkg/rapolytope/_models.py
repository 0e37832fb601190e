from dataclasses import dataclass, field, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from rapolytope.exact_lorentz import ExactScalar, LorentzVector


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(item) for item in value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, ExactScalar):
        return str(value)
    if isinstance(value, LorentzVector):
        return value.to_strings()
    return value


@dataclass
class RAPolytopeModel:
    @classmethod
    def get_dataframe_cols(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: _plain(getattr(self, f.name)) for f in fields(self)}


@dataclass
class VertexRecord(RAPolytopeModel):
    """
    Class to represent one vertex of a polytope: a normalized ray and its incident facets
    """

    direction: List[str]
    kind: str
    incident: List[str]
    incident_count: int = field(default=0)


@dataclass
class PairCheckRecord(RAPolytopeModel):
    """
    Class to represent the cube-diagram prediction for one pair of facets
    """

    first: str
    second: str
    families: str
    incidence: str
    predicted: str
    actual: str
    agrees: bool


@dataclass
class SelectionRecord(RAPolytopeModel):
    """
    Class to represent a maximal pairwise disjoint set of facets
    """

    size: int
    labels: List[str]
    orbit: int
    mode: str


@dataclass
class DeterminationRecord(RAPolytopeModel):
    """
    Class to represent how a facet normal is recovered after a set of facets is removed
    """

    target: str
    removed: List[str]
    anchors: List[str]
    tangent_to: List[str]
    constraint_rank: int
    used_tangency: bool
    determined: bool


@dataclass
class FootprintRecord(RAPolytopeModel):
    """
    Class to represent the boundary footprint of a wall in the upper half-space model
    """

    label: str
    kind: str
    center: Optional[List[str]] = field(default=None)
    radius: Optional[str] = field(default=None)
    normal: Optional[List[str]] = field(default=None)
    offset: Optional[str] = field(default=None)


@dataclass
class CheckRecord(RAPolytopeModel):
    """
    Class to represent one named verification result
    """

    name: str
    passed: bool
    detail: str = field(default="")
    value: Any = field(default=None)


@dataclass
class RunReport(RAPolytopeModel):
    """
    Class to collect the checks of one verifier run
    """

    command: str = field(default="")
    input_digest: str = field(default="")
    duration_seconds: float = field(default=0.0)
    checks: List[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, check: CheckRecord) -> CheckRecord:
        self.checks.append(check)
        return check

    def failed_checks(self) -> List[CheckRecord]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        # wall-clock time stays out of the JSON so reruns are byte-identical
        data = super().to_dict()
        del data["duration_seconds"]
        data["passed"] = self.passed
        return data
