from enum import Enum


class VectorKind(Enum):
    SPACE_LIKE = "space-like"
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"


class Family(Enum):
    TYPE_I = "I"
    TYPE_II = "II"
    TYPE_III = "III"
    OTHER = "other"


class PositionKind(Enum):
    INTERSECTING = "intersecting"
    PARALLEL = "parallel"
    ULTRAPARALLEL = "ultraparallel"


class VertexKind(Enum):
    FINITE = "finite"
    IDEAL = "ideal"


class Incidence(Enum):
    CONTAINED_IN = "contained-in"
    MEET_AT_VERTEX = "meet-at-vertex"
    INTERSECT = "intersect"
    OPPOSITE_IN_QUADRILATERAL = "opposite-in-quadrilateral"
    DISJOINT = "disjoint"
    OTHER = "other"


class DisjointMode(Enum):
    STRICT = "strict"
    WEAK = "weak"


class AuditStrategy(Enum):
    GREEDY = "greedy"
    CUBE_PAIRED = "cube-paired"


class WallKind(Enum):
    PLANE = "plane"
    SPHERE = "sphere"


DEFAULT_DIMENSION = 5
DISTANCE_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-12
THREADS_ENV_VAR = "RAPOLYTOPE_THREADS"
