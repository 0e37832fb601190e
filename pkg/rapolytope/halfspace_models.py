"""
Floating point maps hyperboloid -> ball -> upper half-space, and the footprints that the walls of a
polytope leave on the boundary R^{d-1} of the upper half-space.

Footprints are computed exactly first and converted to floats afterwards.
"""
import itertools
import math
from dataclasses import dataclass, field
from logging import getLogger
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from rapolytope._exceptions import ModelDomainError
from rapolytope._models import FootprintRecord
from rapolytope._reports import FootprintList
from rapolytope._typing import JsonDict
from rapolytope.constants import (
    DISTANCE_TOLERANCE,
    IDENTITY_TOLERANCE,
    Family,
    PositionKind,
    WallKind,
)
from rapolytope.exact_lorentz import ONE, ZERO, ExactScalar, LorentzVector, lorentz_norm
from rapolytope.polytope_core import FacetNormal, PolytopeSpec

logger = getLogger("rapolytope.models")

PointLike = Union[LorentzVector, Sequence[float], np.ndarray]


class InfinityPoint:
    """
    The point at infinity of the upper half-space model.
    """

    _instance: Optional["InfinityPoint"] = None

    def __new__(cls) -> "InfinityPoint":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "InfinityPoint()"

    def __str__(self) -> str:
        return "inf"


INFINITY = InfinityPoint()
UpperPoint = Union[np.ndarray, InfinityPoint]


def _as_floats(x: PointLike) -> np.ndarray:
    if isinstance(x, LorentzVector):
        return np.array(x.to_floats(), dtype=float)
    return np.asarray(x, dtype=float)


def float_lorentz_inner(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.dot(x[:-1], y[:-1]) - x[-1] * y[-1])


def hyperboloid_to_ball(x: PointLike, tolerance: float = DISTANCE_TOLERANCE) -> np.ndarray:
    """
    Stereographic projection from (0, ..., 0, -1). Time-like vectors are first scaled onto the
    hyperboloid; light-like rays go to the unit sphere.
    """
    point = _as_floats(x)
    if point[-1] <= 0:
        raise ModelDomainError(f"Expected a positive last coordinate, got {point[-1]}")
    norm = float_lorentz_inner(point, point)
    scale = float(np.dot(point, point))
    if norm > tolerance * scale:
        raise ModelDomainError(f"Space-like vector {point.tolist()} is not a point of the model")
    if abs(norm) <= tolerance * scale:
        return point[:-1] / point[-1]
    point = point / math.sqrt(-norm)
    return point[:-1] / (1.0 + point[-1])


def ball_to_upper(y: Sequence[float], tolerance: float = DISTANCE_TOLERANCE) -> UpperPoint:
    """
    y -> (2 y_1, ..., 2 y_{d-1}, 1 - |y|^2) / |y - e_d|^2, sending e_d to INFINITY.
    """
    point = np.asarray(y, dtype=float)
    length = float(np.linalg.norm(point))
    if length > 1.0 + tolerance:
        raise ModelDomainError(f"{point.tolist()} lies outside the closed unit ball")
    pole = np.zeros_like(point)
    pole[-1] = 1.0
    denominator = float(np.dot(point - pole, point - pole))
    if denominator <= tolerance * tolerance:
        return INFINITY
    image = np.empty_like(point)
    image[:-1] = 2.0 * point[:-1]
    image[-1] = max(1.0 - length * length, 0.0)
    return image / denominator


def hyperboloid_to_upper(x: PointLike, tolerance: float = DISTANCE_TOLERANCE) -> UpperPoint:
    return ball_to_upper(hyperboloid_to_ball(x, tolerance), tolerance)


def upper_to_hyperboloid(p: Sequence[float]) -> np.ndarray:
    point = np.asarray(p, dtype=float)
    u, t = point[:-1], float(point[-1])
    if t <= 0:
        raise ModelDomainError(f"Upper half-space points need a positive last coordinate, got {t}")
    square = float(np.dot(u, u)) + t * t
    return np.concatenate([u / t, [(square - 1.0) / (2.0 * t), (square + 1.0) / (2.0 * t)]])


def hyperboloid_distance(x: PointLike, y: PointLike) -> float:
    a, b = _as_floats(x), _as_floats(y)
    a = a / math.sqrt(-float_lorentz_inner(a, a))
    b = b / math.sqrt(-float_lorentz_inner(b, b))
    difference = a - b
    chord = math.sqrt(max(float_lorentz_inner(difference, difference), 0.0))
    return 2.0 * math.asinh(chord / 2.0)


def upper_distance(p: Sequence[float], q: Sequence[float]) -> float:
    a, b = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    return 2.0 * math.asinh(float(np.linalg.norm(a - b)) / (2.0 * math.sqrt(a[-1] * b[-1])))


def sample_hyperboloid(count: int, d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    spatial = rng.normal(scale=scale, size=(count, d))
    height = np.sqrt(1.0 + np.sum(spatial * spatial, axis=1))
    return np.hstack([spatial, height[:, None]])


@dataclass
class IsometryCheck:
    pairs: int
    max_abs_error: float
    passed: bool

    def to_dict(self) -> JsonDict:
        return {"pairs": self.pairs, "max_abs_error": self.max_abs_error, "passed": self.passed}


def check_isometry(
    pairs: int = 1000, d: int = 5, seed: int = 0, rtol: float = 1e-10, atol: float = 1e-10
) -> IsometryCheck:
    """
    Compares the hyperboloid distance of random point pairs with the distance of their images.
    """
    rng = np.random.default_rng(seed)
    first = sample_hyperboloid(pairs, d, rng)
    second = sample_hyperboloid(pairs, d, rng)
    expected = np.array([hyperboloid_distance(x, y) for x, y in zip(first, second)])
    images = [(hyperboloid_to_upper(x), hyperboloid_to_upper(y)) for x, y in zip(first, second)]
    actual = np.array(
        [upper_distance(p, q) for p, q in images]  # type: ignore
    )
    errors = np.abs(expected - actual)
    return IsometryCheck(
        pairs, float(errors.max()), bool(np.allclose(actual, expected, rtol=rtol, atol=atol))
    )


@dataclass(frozen=True)
class UpperHalfSpaceWall:
    """
    The boundary trace of a wall: the plane n.p = offset, or the sphere |p - center| = radius.
    The polytope lies on the side n.p <= offset of a plane, and inside or outside a sphere as `outside` says.
    """

    kind: WallKind
    exact_point: Tuple[ExactScalar, ...]
    exact_scalar: ExactScalar
    outside: bool = True

    @property
    def vector(self) -> np.ndarray:
        return np.array([float(c) for c in self.exact_point])

    @property
    def scalar(self) -> float:
        return float(self.exact_scalar)

    @property
    def normal(self) -> Optional[np.ndarray]:
        return self.vector if self.kind is WallKind.PLANE else None

    @property
    def offset(self) -> Optional[float]:
        return self.scalar if self.kind is WallKind.PLANE else None

    @property
    def center(self) -> Optional[np.ndarray]:
        return self.vector if self.kind is WallKind.SPHERE else None

    @property
    def radius(self) -> Optional[float]:
        return self.scalar if self.kind is WallKind.SPHERE else None

    def equation(self, p: Sequence[float]) -> float:
        point = np.asarray(p, dtype=float)
        if self.kind is WallKind.PLANE:
            return float(np.dot(self.vector, point)) - self.scalar
        difference = point - self.vector
        return float(np.dot(difference, difference)) - self.scalar * self.scalar

    def to_record(self, label: str) -> FootprintRecord:
        point = [str(c) for c in self.exact_point]
        if self.kind is WallKind.PLANE:
            return FootprintRecord(label, self.kind.value, normal=point, offset=str(self.exact_scalar))
        return FootprintRecord(label, self.kind.value, center=point, radius=str(self.exact_scalar))


def wall_footprint(v: Union[FacetNormal, LorentzVector]) -> UpperHalfSpaceWall:
    """
    A plane when the wall passes through the ideal point (0, ..., 0, 1, 1), a sphere otherwise.
    """
    vector = v.vector if isinstance(v, FacetNormal) else v
    if lorentz_norm(vector) != ONE:
        raise ModelDomainError(f"{vector!r} is not a unit space-like vector")
    spatial = vector.coords[:-2]
    last, height = vector[-2], vector[-1]
    c = last - height
    if c.is_zero():
        return UpperHalfSpaceWall(WallKind.PLANE, tuple(spatial), last)
    center = tuple(-s / c for s in spatial)
    return UpperHalfSpaceWall(WallKind.SPHERE, center, abs(c.inverse()), c.sign() < 0)


def ideal_vertex_footprint(x: LorentzVector) -> Union[Tuple[ExactScalar, ...], InfinityPoint]:
    """
    The boundary point of a light-like ray, exactly: x' / (x_{d+1} - x_d), or INFINITY.
    """
    if x.is_zero() or not lorentz_norm(x).is_zero():
        raise ModelDomainError(f"{x!r} is not a light-like ray")
    denominator = x[-1] - x[-2]
    if denominator.is_zero():
        return INFINITY
    return tuple(c / denominator for c in x.coords[:-2])


def boundary_ray(p: Sequence[ExactScalar]) -> LorentzVector:
    """
    The light-like ray (2p, |p|^2 - 1, |p|^2 + 1) over a boundary point.
    """
    square = ZERO
    for c in p:
        square = square + c * c
    return LorentzVector([c * 2 for c in p] + [square - 1, square + 1])


def footprint_residual(v: FacetNormal, samples: int = 32, seed: int = 0) -> float:
    """
    Largest |<x, v>| over light rays x lifted from random points of the footprint,
    each ray scaled to last coordinate 1.
    """
    wall = wall_footprint(v)
    rng = np.random.default_rng(seed)
    vector = np.array(v.vector.to_floats())
    dimension = len(wall.exact_point)
    worst = 0.0
    for _ in range(samples):
        direction = rng.normal(size=dimension)
        direction /= np.linalg.norm(direction)
        if wall.kind is WallKind.SPHERE:
            point = wall.vector + wall.scalar * direction
        else:
            normal = wall.vector
            point = wall.scalar * normal + (direction - np.dot(direction, normal) * normal)
        square = float(np.dot(point, point))
        ray = np.concatenate([2.0 * point, [square - 1.0, square + 1.0]]) / (square + 1.0)
        worst = max(worst, abs(float_lorentz_inner(ray, vector)))
    return worst


def footprint_catalog(P: PolytopeSpec) -> FootprintList:
    return FootprintList(wall_footprint(f).to_record(f.label) for f in P.facets)


def _expected_wall(f: FacetNormal) -> Optional[Tuple[WallKind, Tuple[ExactScalar, ...], ExactScalar]]:
    a = tuple(f.a_projection)
    if f.family is Family.TYPE_I:
        return WallKind.PLANE, a, ONE
    if f.family in (Family.TYPE_II, Family.TYPE_III):
        return WallKind.SPHERE, a, ONE
    return None


def footprints_tangent(first: UpperHalfSpaceWall, second: UpperHalfSpaceWall, tolerance: float) -> bool:
    if first.kind is WallKind.PLANE and second.kind is WallKind.PLANE:
        return abs(abs(float(np.dot(first.vector, second.vector))) - 1.0) < tolerance
    if first.kind is WallKind.PLANE or second.kind is WallKind.PLANE:
        plane, sphere = (first, second) if first.kind is WallKind.PLANE else (second, first)
        distance = abs(float(np.dot(plane.vector, sphere.vector)) - plane.scalar)
        return abs(distance - sphere.scalar) < tolerance
    distance = float(np.linalg.norm(first.vector - second.vector))
    return (
        abs(distance - first.scalar - second.scalar) < tolerance
        or abs(distance - abs(first.scalar - second.scalar)) < tolerance
    )


def footprints_orthogonal(first: UpperHalfSpaceWall, second: UpperHalfSpaceWall, tolerance: float) -> bool:
    if first.kind is WallKind.PLANE and second.kind is WallKind.PLANE:
        return abs(float(np.dot(first.vector, second.vector))) < tolerance
    if first.kind is WallKind.PLANE or second.kind is WallKind.PLANE:
        plane, sphere = (first, second) if first.kind is WallKind.PLANE else (second, first)
        return abs(float(np.dot(plane.vector, sphere.vector)) - plane.scalar) < tolerance
    difference = first.vector - second.vector
    return abs(
        float(np.dot(difference, difference)) - first.scalar ** 2 - second.scalar ** 2
    ) < tolerance


@dataclass
class StandardConfigurationReport:
    planes: int
    spheres: int
    mismatches: List[str] = field(default_factory=list)
    tangency_failures: List[Tuple[str, str]] = field(default_factory=list)
    orthogonality_failures: List[Tuple[str, str]] = field(default_factory=list)
    max_residual: float = 0.0

    @property
    def passed(self) -> bool:
        return not (self.mismatches or self.tangency_failures or self.orthogonality_failures)

    def to_dict(self) -> JsonDict:
        return {
            "planes": self.planes,
            "spheres": self.spheres,
            "mismatches": self.mismatches,
            "tangency_failures": [list(p) for p in self.tangency_failures],
            "orthogonality_failures": [list(p) for p in self.orthogonality_failures],
            "max_residual": self.max_residual,
            "passed": self.passed,
        }


def verify_standard_configuration(
    P: PolytopeSpec, tolerance: float = DISTANCE_TOLERANCE
) -> StandardConfigurationReport:
    """
    Checks every footprint against the catalog (type I: plane a.p = 1, type II and III: unit
    sphere around a) exactly and in floats, then checks tangency of parallel pairs and
    orthogonality of orthogonal pairs.
    """
    walls = [wall_footprint(f) for f in P.facets]
    report = StandardConfigurationReport(
        sum(1 for w in walls if w.kind is WallKind.PLANE),
        sum(1 for w in walls if w.kind is WallKind.SPHERE),
    )
    for f, wall in zip(P.facets, walls):
        expected = _expected_wall(f)
        if expected is None:
            continue
        kind, point, scalar = expected
        exact_match = wall.kind is kind and wall.exact_point == point and wall.exact_scalar == scalar
        float_match = wall.kind is kind and bool(
            np.allclose(wall.vector, [float(c) for c in point], atol=IDENTITY_TOLERANCE, rtol=0)
        ) and abs(wall.scalar - float(scalar)) < IDENTITY_TOLERANCE
        if not (exact_match and float_match):
            report.mismatches.append(f.label)
        report.max_residual = max(report.max_residual, footprint_residual(f))
    for i, j in itertools.combinations(range(len(P)), 2):
        kind = P.positions[i][j]
        pair = (P.facets[i].label, P.facets[j].label)
        if kind is PositionKind.PARALLEL and not footprints_tangent(walls[i], walls[j], tolerance):
            report.tangency_failures.append(pair)
        if (
            kind is PositionKind.INTERSECTING
            and P.gram[i][j].is_zero()
            and not footprints_orthogonal(walls[i], walls[j], tolerance)
        ):
            report.orthogonality_failures.append(pair)
    logger.info(
        "%s planes, %s spheres, %s catalog mismatches",
        report.planes,
        report.spheres,
        len(report.mismatches),
    )
    return report
