"""
Exact arithmetic over Q(sqrt 2), vectors in Lorentzian (d+1)-space and exact linear algebra.

Everything in this module is an immutable value or a pure function, so results can be shared
freely between worker threads.
"""
import math
import re
from fractions import Fraction
from functools import reduce, total_ordering
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from rapolytope._exceptions import (
    DimensionMismatchError,
    NonUnitVectorError,
    PolytopeInputError,
)
from rapolytope.constants import DEFAULT_DIMENSION, VectorKind

ScalarLike = Union["ExactScalar", int, Fraction]

_SCALAR_PATTERN = re.compile(
    r"^\s*(?P<rat>[+-]?\d+(?:/\d+)?)"
    r"(?:\s*(?P<op>[+-])\s*(?P<root>\d+(?:/\d+)?)\s*\*\s*r2)?\s*$"
)
_PURE_ROOT_PATTERN = re.compile(r"^\s*(?P<root>[+-]?\d+(?:/\d+)?)\s*\*\s*r2\s*$")


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@total_ordering
class ExactScalar:
    """
    An element a + b*sqrt(2) of Q(sqrt 2) with arbitrary precision rational parts.

    Both parts are kept as reduced fractions, so two scalars are equal exactly when their parts are.
    """

    __slots__ = ("_a", "_b")

    def __init__(
        self, rat_part: Union[int, Fraction, str] = 0, root2_part: Union[int, Fraction, str] = 0
    ) -> None:
        self._a = Fraction(rat_part)
        self._b = Fraction(root2_part)

    @property
    def rat_part(self) -> Fraction:
        return self._a

    @property
    def root2_part(self) -> Fraction:
        return self._b

    @classmethod
    def coerce(cls, value: ScalarLike) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"Can't interpret {value!r} as an exact scalar")

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """
        Parses the serialized form "a/b" or "a/b+c/d*r2" (also "c/d*r2").
        """
        match = _SCALAR_PATTERN.match(text)
        if match is not None:
            root = Fraction(match.group("root")) if match.group("root") else Fraction(0)
            if match.group("op") == "-":
                root = -root
            return cls(Fraction(match.group("rat")), root)
        match = _PURE_ROOT_PATTERN.match(text)
        if match is not None:
            return cls(0, Fraction(match.group("root")))
        raise PolytopeInputError(f"Can't parse exact scalar from {text!r}")

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_rational(self) -> bool:
        return self._b == 0

    def sign(self) -> int:
        """
        Exact sign, decided by comparing a^2 with 2b^2.
        """
        a, b = self._a, self._b
        if b == 0:
            return _sign(a)
        if a == 0:
            return _sign(b)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        if a > 0:
            return _sign(a * a - 2 * b * b)
        return _sign(2 * b * b - a * a)

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self._a, -self._b)

    def field_norm(self) -> Fraction:
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self) -> "ExactScalar":
        norm = self.field_norm()
        if norm == 0:
            raise ZeroDivisionError("ExactScalar division by zero")
        return ExactScalar(self._a / norm, -self._b / norm)

    def __abs__(self) -> "ExactScalar":
        return -self if self.sign() < 0 else self

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self._a, -self._b)

    def __add__(self, other: ScalarLike) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self._a + other, self._b)
        if isinstance(other, ExactScalar):
            return ExactScalar(self._a + other._a, self._b + other._b)
        return NotImplemented

    def __radd__(self, other: ScalarLike) -> "ExactScalar":
        return self + other

    def __sub__(self, other: ScalarLike) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self._a - other, self._b)
        if isinstance(other, ExactScalar):
            return ExactScalar(self._a - other._a, self._b - other._b)
        return NotImplemented

    def __rsub__(self, other: ScalarLike) -> "ExactScalar":
        return (-self) + other

    def __mul__(self, other: ScalarLike) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self._a * other, self._b * other)
        if isinstance(other, ExactScalar):
            if self._b == 0 and other._b == 0:
                return ExactScalar(self._a * other._a)
            return ExactScalar(
                self._a * other._a + 2 * self._b * other._b,
                self._a * other._b + self._b * other._a,
            )
        return NotImplemented

    def __rmul__(self, other: ScalarLike) -> "ExactScalar":
        return self * other

    def __truediv__(self, other: ScalarLike) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("ExactScalar division by zero")
            return ExactScalar(self._a / other, self._b / other)
        if isinstance(other, ExactScalar):
            if other._b == 0:
                return self / other._a
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: ScalarLike) -> "ExactScalar":
        return ExactScalar.coerce(other) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactScalar):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return False

    def __lt__(self, other: ScalarLike) -> bool:
        return (self - ExactScalar.coerce(other)).sign() < 0

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b))

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(2)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"ExactScalar({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        op = "+" if self._b > 0 else "-"
        return f"{self._a}{op}{abs(self._b)}*r2"


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
ROOT2 = ExactScalar(0, 1)
INV_ROOT2 = ExactScalar(0, Fraction(1, 2))


class LorentzVector:
    """
    A vector of R^{d,1} with exact coordinates; the last coordinate is the time-like one.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords: Iterable[ScalarLike]) -> None:
        self._coords: Tuple[ExactScalar, ...] = tuple(ExactScalar.coerce(c) for c in coords)
        if len(self._coords) < 2:
            raise DimensionMismatchError(2, len(self._coords))

    @classmethod
    def from_values(cls, values: Iterable[Union[ScalarLike, str]]) -> "LorentzVector":
        return cls(
            ExactScalar.parse(value) if isinstance(value, str) else ExactScalar.coerce(value)
            for value in values
        )

    @property
    def coords(self) -> Tuple[ExactScalar, ...]:
        return self._coords

    @property
    def d(self) -> int:
        return len(self._coords) - 1

    def __len__(self) -> int:
        return len(self._coords)

    def __iter__(self) -> Iterator[ExactScalar]:
        return iter(self._coords)

    def __getitem__(self, index: int) -> ExactScalar:
        return self._coords[index]

    def _check(self, other: "LorentzVector") -> None:
        if len(other) != len(self):
            raise DimensionMismatchError(len(self), len(other))

    def __add__(self, other: "LorentzVector") -> "LorentzVector":
        self._check(other)
        return LorentzVector(a + b for a, b in zip(self._coords, other._coords))

    def __sub__(self, other: "LorentzVector") -> "LorentzVector":
        self._check(other)
        return LorentzVector(a - b for a, b in zip(self._coords, other._coords))

    def __neg__(self) -> "LorentzVector":
        return LorentzVector(-a for a in self._coords)

    def scale(self, factor: ScalarLike) -> "LorentzVector":
        return LorentzVector(a * factor for a in self._coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self._coords)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self._coords)

    def to_strings(self) -> List[str]:
        return [str(c) for c in self._coords]

    def to_floats(self) -> List[float]:
        return [float(c) for c in self._coords]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LorentzVector) and self._coords == other._coords

    def __hash__(self) -> int:
        return hash(self._coords)

    def __repr__(self) -> str:
        return "LorentzVector({})".format(", ".join(self.to_strings()))


Matrix = List[List[ExactScalar]]


def lorentz_inner(x: LorentzVector, y: LorentzVector) -> ExactScalar:
    """
    <x, y> = x_1 y_1 + ... + x_d y_d - x_{d+1} y_{d+1}
    """
    if len(x) != len(y):
        raise DimensionMismatchError(len(x), len(y))
    total = -(x[-1] * y[-1])
    for a, b in zip(x.coords[:-1], y.coords[:-1]):
        if a.is_zero() or b.is_zero():
            continue
        total = total + a * b
    return total


def lorentz_norm(x: LorentzVector) -> ExactScalar:
    return lorentz_inner(x, x)


def classify_vector(x: LorentzVector) -> VectorKind:
    sign = lorentz_norm(x).sign()
    if sign > 0:
        return VectorKind.SPACE_LIKE
    if sign < 0:
        return VectorKind.TIME_LIKE
    return VectorKind.LIGHT_LIKE


def require_unit(u: LorentzVector, label: Optional[str] = None) -> None:
    norm = lorentz_norm(u)
    if norm != ONE:
        raise NonUnitVectorError(norm, label)


def reflect(u: LorentzVector, x: LorentzVector) -> LorentzVector:
    """
    Lorentzian reflection x -> x - 2<x,u>u in the hyperplane orthogonal to the unit space-like u.
    """
    require_unit(u)
    coefficient = lorentz_inner(x, u) * 2
    if coefficient.is_zero():
        return x
    return x - u.scale(coefficient)


def lorentz_form_matrix(d: int = DEFAULT_DIMENSION) -> Matrix:
    """
    The diagonal matrix J = diag(1, ..., 1, -1) of the form.
    """
    form = identity_matrix(d + 1)
    form[d][d] = -ONE
    return form


def identity_matrix(size: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]


def reflection_matrix(u: LorentzVector) -> Matrix:
    """
    Matrix of reflect(u, .) acting on column vectors: I - 2 u (J u)^T.
    """
    require_unit(u)
    size = len(u)
    ju = list(u.coords[:-1]) + [-u[-1]]
    return [
        [(ONE if i == j else ZERO) - u[i] * ju[j] * 2 for j in range(size)]
        for i in range(size)
    ]


def matrix_multiply(left: Matrix, right: Matrix) -> Matrix:
    if len(left[0]) != len(right):
        raise DimensionMismatchError(len(left[0]), len(right), what="matrix")
    columns = list(zip(*right))
    return [
        [reduce(lambda acc, pair: acc + pair[0] * pair[1], zip(row, column), ZERO) for column in columns]
        for row in left
    ]


def matrix_transpose(matrix: Matrix) -> Matrix:
    return [list(column) for column in zip(*matrix)]


def matrix_vector(matrix: Matrix, x: LorentzVector) -> LorentzVector:
    if len(matrix[0]) != len(x):
        raise DimensionMismatchError(len(matrix[0]), len(x))
    return LorentzVector(
        reduce(lambda acc, pair: acc + pair[0] * pair[1], zip(row, x.coords), ZERO)
        for row in matrix
    )


def row_reduce(rows: Sequence[Sequence[ExactScalar]]) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form with the first nonzero entry of each column as pivot.

    :return: the nonzero reduced rows and their pivot columns
    """
    matrix: Matrix = [list(row) for row in rows]
    if not matrix:
        return [], []
    width = len(matrix[0])
    pivots: List[int] = []
    pivot_row = 0
    for column in range(width):
        found = next(
            (r for r in range(pivot_row, len(matrix)) if not matrix[r][column].is_zero()),
            None,
        )
        if found is None:
            continue
        matrix[pivot_row], matrix[found] = matrix[found], matrix[pivot_row]
        pivot_value = matrix[pivot_row][column]
        if pivot_value != ONE:
            matrix[pivot_row] = [entry / pivot_value for entry in matrix[pivot_row]]
        for r in range(len(matrix)):
            if r == pivot_row:
                continue
            factor = matrix[r][column]
            if factor.is_zero():
                continue
            matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[pivot_row])]
        pivots.append(column)
        pivot_row += 1
        if pivot_row == len(matrix):
            break
    return matrix[:pivot_row], pivots


def rank(vectors: Sequence[LorentzVector]) -> int:
    if not vectors:
        return 0
    _, pivots = row_reduce([v.coords for v in vectors])
    return len(pivots)


def _form_rows(vectors: Sequence[LorentzVector]) -> Matrix:
    # <x, v> = 0 is the Euclidean equation (J v) . x = 0
    return [list(v.coords[:-1]) + [-v[-1]] for v in vectors]


def solve_kernel(vectors: Sequence[LorentzVector]) -> List[LorentzVector]:
    """
    Basis of the common Lorentz-orthogonal complement {x : <x, v_i> = 0 for all i}.

    The basis has (d+1) - rank vectors; an empty list means the complement is zero.
    """
    if not vectors:
        raise PolytopeInputError("solve_kernel needs at least one vector")
    size = len(vectors[0])
    for v in vectors:
        if len(v) != size:
            raise DimensionMismatchError(size, len(v))
    reduced, pivots = row_reduce(_form_rows(vectors))
    free_columns = [c for c in range(size) if c not in pivots]
    basis = []
    for free in free_columns:
        coords = [ZERO] * size
        coords[free] = ONE
        for row, pivot in zip(reduced, pivots):
            coords[pivot] = -row[free]
        basis.append(LorentzVector(coords))
    return basis


def inverse_matrix(matrix: Matrix) -> Matrix:
    size = len(matrix)
    augmented = [list(row) + identity_row for row, identity_row in zip(matrix, identity_matrix(size))]
    reduced, pivots = row_reduce(augmented)
    if pivots[:size] != list(range(size)):
        raise ZeroDivisionError("matrix is singular")
    return [row[size:] for row in reduced]


def is_positive_semidefinite(matrix: Sequence[Sequence[ExactScalar]]) -> bool:
    """
    Exact test by symmetric Gaussian elimination on a symmetric matrix.
    """
    work: Matrix = [list(row) for row in matrix]
    size = len(work)
    for k in range(size):
        pivot = next((i for i in range(k, size) if work[i][i].sign() > 0), None)
        if pivot is None:
            for i in range(k, size):
                for j in range(k, size):
                    if not work[i][j].is_zero():
                        return False
            return True
        if pivot != k:
            work[k], work[pivot] = work[pivot], work[k]
            for row in work:
                row[k], row[pivot] = row[pivot], row[k]
        head = work[k][k]
        for i in range(k + 1, size):
            factor = work[i][k] / head
            if factor.is_zero():
                continue
            for j in range(k + 1, size):
                work[i][j] = work[i][j] - factor * work[k][j]
    return True


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def normalize_ray(x: LorentzVector) -> LorentzVector:
    """
    Canonical representative of the ray through a non-space-like x: coprime integers when
    x is rational, otherwise scaled to last coordinate 1; the last coordinate is positive.
    """
    if x[-1].is_zero():
        raise PolytopeInputError(f"{x!r} has no canonical ray form (zero last coordinate)")
    if x.is_rational():
        fractions = [c.rat_part for c in x]
        denominator = reduce(_lcm, (f.denominator for f in fractions), 1)
        integers = [int(f * denominator) for f in fractions]
        divisor = reduce(math.gcd, (abs(i) for i in integers), 0)
        if integers[-1] < 0:
            divisor = -divisor
        return LorentzVector(ExactScalar(i // divisor) for i in integers)
    return x.scale(x[-1].inverse())
