from fractions import Fraction

import pytest

from rapolytope._exceptions import (
    CertificateDisagreementError,
    DimensionMismatchError,
    InvalidSelectionError,
    NonUnitVectorError,
    NotRightAngledError,
    PolytopeInputError,
    RAPolytopeError,
)
from rapolytope.constants import Family
from rapolytope.exact_lorentz import LorentzVector, lorentz_inner
from rapolytope.fuchsian_ends import selection_from_labels
from rapolytope.polytope_core import (
    FacetNormal,
    PolytopeSpec,
    build_polytope_P,
    coxeter_presentation,
    load_polytope,
)

P = build_polytope_P()


def test_not_right_angled_names_the_pair() -> None:
    """
    Tilting X+ keeps it a unit vector, so only the right-angle assumption of the presentation breaks
    """
    facets = list(P.facets)
    facets[0] = FacetNormal(
        LorentzVector([Fraction(3, 5), Fraction(4, 5), 0, 0, 1, 1]), "X+", Family.TYPE_I
    )
    with pytest.raises(NotRightAngledError) as info:
        coxeter_presentation(PolytopeSpec(P.d, tuple(facets)))
    assert info.value.pair == ("X+", "X-")
    assert str(info.value.inner) == "-3/5"
    assert "X+ and X-" in str(info.value)


def test_non_unit_facet_normal() -> None:
    with pytest.raises(NonUnitVectorError) as info:
        FacetNormal(LorentzVector([1, 1, 0, 0, 1, 1]), "bad")
    assert "for bad" in str(info.value)
    assert str(info.value.norm) == "2"


def test_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError) as info:
        lorentz_inner(LorentzVector([1, 0, 1]), LorentzVector([1, 0, 0, 1]))
    assert (info.value.expected, info.value.actual) == (3, 4)


def test_invalid_selection_message() -> None:
    with pytest.raises(InvalidSelectionError) as info:
        selection_from_labels(P, ["X+", "Y+"])
    assert info.value.pair == ("X+", "Y+")
    assert "strict" in str(info.value)


def test_malformed_input_is_a_polytope_input_error() -> None:
    with pytest.raises(PolytopeInputError):
        load_polytope(b"[1, 2")
    with pytest.raises(PolytopeInputError):
        load_polytope(b'{"dimension": 2, "facets": [{"label": "E1"}]}')
    with pytest.raises(PolytopeInputError, match="Malformed facet #0"):
        load_polytope(b'{"dimension": 5, "facets": [{"label": "X+", "vector": [1.0, 0, 0, 0, 1, 1]}]}')
    with pytest.raises(PolytopeInputError, match="must be a list"):
        load_polytope(b'{"dimension": 5, "facets": 7}')


def test_certificate_disagreement_message() -> None:
    error = CertificateDisagreementError(True, False, [{"method": "ray_oracle", "reason": "forced"}])
    assert "combinatorial=True" in str(error)
    assert "forced" in str(error)
    assert error.failures[0]["method"] == "ray_oracle"


def test_every_error_shares_the_base_class() -> None:
    for error_type in (
        CertificateDisagreementError,
        DimensionMismatchError,
        InvalidSelectionError,
        NonUnitVectorError,
        NotRightAngledError,
        PolytopeInputError,
    ):
        assert issubclass(error_type, RAPolytopeError)


if __name__ == "__main__":
    pytest.main()
