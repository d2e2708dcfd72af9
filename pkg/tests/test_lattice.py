from fractions import Fraction

import pytest

from orthoforms.errors import LatticeSpecError
from orthoforms.lattice import (
    Component,
    RootLatticeSpec,
    build,
    component_invariants,
    delta_value,
    parse_split,
    table_bigradings,
)
from orthoforms.table_data import delta_table


@pytest.mark.parametrize("label, expected", sorted(delta_table().items()))
def test_delta_matches_reference(label, expected):
    assert delta_value(label) == expected


def test_delta_is_additive_over_components():
    assert build("A1+D4").delta == Fraction(1, 2) + 1
    assert build("2A2").delta == Fraction(4, 3)


@pytest.mark.parametrize(
    "label, det, divisors",
    [("A2", 3, (3,)), ("D4", 4, (2, 2)), ("D5", 4, (4,)), ("E6", 3, (3,)), ("E7", 2, (2,))],
)
def test_discriminant_group(label, det, divisors):
    lattice = build(label)
    assert lattice.det == det
    assert lattice.elementary_divisors == divisors
    assert len(lattice.discriminant_classes) == det


@pytest.mark.parametrize(
    "label, roots, coxeter",
    [("A1", 2, 2), ("A4", 20, 5), ("D4", 24, 6), ("D6", 60, 10), ("E6", 72, 12), ("E7", 126, 18)],
)
def test_component_invariants(label, roots, coxeter):
    info = component_invariants(RootLatticeSpec.parse(label).components[0])
    assert info.root_count == roots
    assert info.coxeter_number == coxeter


def test_e8_has_240_roots():
    info = component_invariants(Component("E", 8))
    assert info.root_count == 240
    assert info.coxeter_number == 30
    assert delta_value("E8") == 0


@pytest.mark.parametrize("label", ["E8", "A1+E8"])
def test_build_refuses_e8_components(label):
    with pytest.raises(LatticeSpecError):
        build(label)


def test_dual_short_vectors_of_a1():
    vectors = build("A1").short_vectors(Fraction(1, 2), in_dual=True)
    assert sorted(v.coords for v in vectors) == [(Fraction(-1, 2),), (Fraction(1, 2),)]


def test_pairing_round_trip():
    lattice = build("A2+D4")
    coords = (Fraction(1, 3), Fraction(2, 3), Fraction(1, 2), 0, 0, Fraction(1, 2))
    assert lattice.from_pairing(lattice.pairing(coords)) == tuple(Fraction(c) for c in coords)
    assert lattice.pairing_norm(lattice.pairing(coords)) == lattice.norm(coords)


def test_frame_reproduces_gram():
    lattice = build("A2+D5")
    frame = lattice.frame()
    assert frame is not None
    form = lattice.quadratic_form_of_pairings(frame)
    assert form == [[Fraction(x) for x in row] for row in lattice.gram]


def test_e_type_has_no_frame():
    assert build("E6").frame() is None


def test_parse_and_print():
    spec = RootLatticeSpec.parse("A2 + 2A1 + D4")
    assert [c.label for c in spec.components] == ["A2", "A1", "A1", "D4"]
    assert spec.rank == 8
    assert str(RootLatticeSpec.parse("2A1+A3")) == "2A1+A3"
    assert str(RootLatticeSpec.parse("0")) == "0"
    assert RootLatticeSpec.parse("A1(2)").components[0].rescale == 2


def test_parse_split():
    l0, l1 = parse_split("2A1:D4")
    assert str(l0) == "2A1"
    assert str(l1) == "D4"
    with pytest.raises(LatticeSpecError):
        parse_split("2A1+D4")


@pytest.mark.parametrize("text", ["E5", "X3", "A0", "3"])
def test_bad_lattice_names(text):
    with pytest.raises(LatticeSpecError):
        RootLatticeSpec.parse(text)


def test_class_of_rejects_non_dual_vectors():
    with pytest.raises(LatticeSpecError):
        build("A1").class_of((Fraction(1, 3),))


def test_table_bigradings():
    assert [(b.weight, b.index) for b in table_bigradings(Component("A", 2))] == [(0, 1), (-2, 1), (-3, 1)]
    d5 = table_bigradings(Component("D", 5))
    assert [(b.weight, b.index) for b in d5] == [(0, 1), (-2, 1), (-4, 1), (-5, 1), (-6, 2), (-8, 2)]
    assert [b.psi for b in d5].count(True) == 1
    assert table_bigradings(Component("E", 8)) == ()
