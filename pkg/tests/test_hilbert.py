import pytest

from orthoforms.errors import LatticeSpecError, OrthoformsError
from orthoforms.hilbert import (
    BigradedAlgebra,
    dim_bound,
    expand_rational,
    hilbert_series,
    minimal_generators,
    paramodular_bigradings,
    parse_bigradings,
)
from orthoforms.lattice import Bigrading
from orthoforms.table_data import hilbert_item, hilbert_items
from orthoforms.tables import check_hilbert_item

A2_E6 = [
    4, 4, 5, 6, 7, 7, 8, 9, 9, 10, 10, 10, 10, 11, 11, 12, 12, 12, 12, 13, 13, 13,
    14, 14, 15, 15, 15, 16, 16, 16, 17, 18, 18, 18, 19, 20, 21, 22, 24,
]


def test_expand_rational():
    assert expand_rational({0: 1}, [2], 6) == [1, 0, 1, 0, 1, 0, 1]
    assert expand_rational({0: 1, 1: -1}, [1], 4) == [1, 0, 0, 0, 0]


def test_a1_algebra_is_free():
    assert hilbert_series("A1") == expand_rational({0: 1}, [4, 6, 10, 12], 40)
    assert minimal_generators("A1") == [4, 6, 10, 12]


def test_reference_items_are_complete():
    assert len(hilbert_items()) == 26
    assert hilbert_item("2A1").generators == [4, 6, 8, 10, 10, 12]
    with pytest.raises(KeyError):
        hilbert_item("E8")


@pytest.mark.parametrize("item", hilbert_items(), ids=lambda item: item.lattice)
def test_series_matches_reference(item):
    _, numerator, denominator = item.corrected
    assert hilbert_series(item.lattice, 40) == expand_rational(numerator, denominator, 40)


def test_a2_a3_series_needs_the_weight_4_and_5_factors():
    item = hilbert_item("A2+A3")
    assert item.erratum is not None
    assert item.erratum.denominator == [4, 5, 6, 6, 7, 8, 9, 10, 12]
    series = hilbert_series("A2+A3", 40)
    assert series[4] == 1
    assert series != expand_rational(item.numerator, item.denominator, 40)
    assert series == expand_rational(item.erratum.numerator, item.erratum.denominator, 40)


@pytest.mark.parametrize("lattice", ["2A1", "4A1", "A1+A2", "A1+A3"])
def test_generators_match_reference(lattice):
    assert minimal_generators(lattice) == sorted(hilbert_item(lattice).generators)


@pytest.mark.slow
@pytest.mark.parametrize("item", hilbert_items(), ids=lambda item: item.lattice)
def test_every_reference_item(item):
    assert check_hilbert_item(item, 40) == (True, True)


def test_a2_e6_has_39_generators():
    weights = minimal_generators("A2+E6")
    assert len(weights) == 39
    assert weights == A2_E6
    assert hilbert_item("A2+E6").erratum.generators == A2_E6


@pytest.mark.parametrize("lattice, weight", [("A2+E6", 9), ("A1+A4", 10)])
def test_printed_generator_lists_cannot_span(lattice, weight):
    # monomials in the printed weights, counted before any relation
    printed = hilbert_item(lattice).generators
    monomials = expand_rational({0: 1}, printed, weight)[weight]
    assert monomials < dim_bound(weight, lattice)


def test_a1_a4_generators_match_erratum():
    item = hilbert_item("A1+A4")
    assert minimal_generators("A1+A4") == [4, 5, 6, 6, 7, 7, 8, 8, 9, 10, 10, 12]
    assert item.erratum.generators == minimal_generators("A1+A4")
    assert sorted(item.generators) != minimal_generators("A1+A4")


def test_erratum_item_logs_the_printed_mismatch(caplog):
    item = hilbert_item("A1+A4")
    with caplog.at_level("WARNING", logger="orthoforms.tables"):
        assert check_hilbert_item(item, 30) == (True, True)
    assert "recorded erratum matches" in caplog.text


@pytest.mark.parametrize(
    "level, weights",
    [(2, [4, 6, 8, 10, 11, 12]), (3, [4, 6, 6, 8, 9, 10, 11, 12])],
)
def test_paramodular_examples(level, weights):
    algebra = BigradedAlgebra.single(paramodular_bigradings(level), f"A1({level})")
    assert minimal_generators(algebra) == weights


def test_paramodular_levels():
    assert {b.weight for b in paramodular_bigradings(2)} == {0, -1, -2, -4}
    assert all(b.index == 1 for b in paramodular_bigradings(3))
    with pytest.raises(OrthoformsError):
        paramodular_bigradings(5)


def test_parse_bigradings():
    assert parse_bigradings("0:1,-2:1,-1:2") == (Bigrading(0, 1), Bigrading(-2, 1), Bigrading(-1, 2))
    with pytest.raises(OrthoformsError):
        parse_bigradings("0-1")


@pytest.mark.parametrize("k, expected", [(-2, 0), (0, 1), (4, 1), (8, 2), (10, 3)])
def test_dim_bound(k, expected):
    assert dim_bound(k, "2A1") == expected


def test_dim_bound_agrees_with_series():
    series = hilbert_series("A1+A2", 30)
    assert [dim_bound(k, "A1+A2") for k in range(31)] == series


def test_slope_and_bad_algebras():
    assert BigradedAlgebra.of_lattice("2A1").slope == 8
    with pytest.raises(OrthoformsError):
        BigradedAlgebra.single([Bigrading(-13, 1)]).index_bound(10)
    with pytest.raises(LatticeSpecError):
        BigradedAlgebra.of_lattice("E8")
    with pytest.raises(OrthoformsError):
        BigradedAlgebra.single([])


def test_generator_bound_warning(caplog):
    with caplog.at_level("WARNING", logger="orthoforms.hilbert"):
        minimal_generators(BigradedAlgebra.single([Bigrading(0, 1), Bigrading(-1, 2)]), tmax=3)
    assert "raise the index bound" in caplog.text
