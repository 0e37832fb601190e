from typing import Any, Dict, List, Optional, Tuple


class RAPolytopeError(Exception):
    """
    Base class for every error raised by rapolytope
    """

    def __init__(self, msg: str, *args: Any):
        self.msg = msg
        super().__init__(msg, *args)

    def __str__(self) -> str:
        return self.msg


class DimensionMismatchError(RAPolytopeError):
    """
    Raised when vectors or matrices of inconsistent length are combined
    """

    def __init__(self, expected: int, actual: int, what: str = "vector"):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Expected a {what} of length {expected} but got length {actual}."
        )


class NonUnitVectorError(RAPolytopeError):
    """
    Raised when a reflection vector or facet normal does not have Lorentzian norm exactly 1
    """

    def __init__(self, norm: Any, label: Optional[str] = None):
        self.norm = norm
        where = f" for {label}" if label else ""
        super().__init__(
            f"Expected a unit space-like vector{where}, but <u,u> = {norm}."
        )


class PolytopeInputError(RAPolytopeError):
    """
    Raised when a polytope description, facet label or facet index can't be used
    """


class NotRightAngledError(RAPolytopeError):
    """
    Raised by operations that assume every intersecting pair of facets is orthogonal
    """

    def __init__(self, pair: Tuple[str, str], inner: Any):
        self.pair = pair
        self.inner = inner
        super().__init__(
            "The polytope is not right-angled: facets {} and {} intersect with "
            "<v,w> = {}.".format(pair[0], pair[1], inner)
        )


class FamilyTagError(RAPolytopeError):
    """
    Raised when cube-diagram logic is applied to a facet without a usable family tag
    """


class InfiniteVolumeError(RAPolytopeError):
    """
    Raised when an operation needs a finite-volume polytope and the certificate says otherwise
    """


class CertificateDisagreementError(RAPolytopeError):
    """
    Raised when the two finite-volume methods reach different verdicts. This is never resolved silently.
    """

    def __init__(
        self,
        method_combinatorial: bool,
        method_ray_oracle: bool,
        failures: List[Dict[str, Any]],
    ):
        self.method_combinatorial = method_combinatorial
        self.method_ray_oracle = method_ray_oracle
        self.failures = failures
        super().__init__(
            "Finite volume methods disagree: combinatorial={}, ray oracle={}.\n"
            "Diagnostics:\n {}".format(method_combinatorial, method_ray_oracle, failures)
        )


class RealizationError(RAPolytopeError):
    """
    Raised when a facet permutation has no Lorentz matrix realization
    """


class ModelDomainError(RAPolytopeError):
    """
    Raised when a model conversion is handed a point outside its domain
    """


class InvalidSelectionError(RAPolytopeError):
    """
    Raised when a facet selection is not pairwise disjoint under its mode
    """

    def __init__(self, pair: Tuple[str, str], mode: str):
        self.pair = pair
        super().__init__(
            f"Facets {pair[0]} and {pair[1]} are not disjoint in {mode} mode."
        )
