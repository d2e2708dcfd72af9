from fractions import Fraction

import pytest

from orthoforms.constants import Q_SCALE
from orthoforms.errors import InsufficientPrecision, NegativeXiOrder, OrthoformsError
from orthoforms.jacobi import JacobiExpansion, ThetaBlockSpec, classify, hecke, q0_invariants, theta_block
from orthoforms.lattice import build
from orthoforms.lifts import (
    borch,
    borch_log,
    fj_symmetry_check,
    grit,
    psi_from_block,
    psi_input,
    verify_theta_identity,
    xi_order,
    zeroth_term,
)
from orthoforms.qseries import sigma


@pytest.fixture(scope="module")
def psi_a1():
    return psi_from_block(ThetaBlockSpec.of_lattice("A1"), 3)


@pytest.mark.parametrize("m", range(1, 7))
def test_psi_constant_terms(m):
    psi = psi_input(m, 1)
    zero = (0,) * m
    layer = psi.layer(0)
    assert layer[zero] == 2 * (12 - m)
    others = {y: c for y, c in layer.items() if y != zero}
    assert set(others.values()) == {1}
    assert len(others) == 2 * m
    assert psi.is_integral
    assert xi_order(psi) == 1


def test_psi_invariants(psi_a1):
    assert psi_a1.weight == 0
    assert psi_a1.index == 1
    assert classify(psi_a1) == "weak"
    invariants = q0_invariants(psi_a1)
    assert invariants.c == 1
    assert invariants.vector_system_ok


def test_psi_input_range():
    with pytest.raises(OrthoformsError):
        psi_input(12)


def test_zeroth_term_of_constant_is_eisenstein():
    lattice = build("A1")
    phi = JacobiExpansion(lattice, 4, 1, {(0, (0,)): Fraction(1)}, Q_SCALE * 4)
    term = zeroth_term(phi, 4)
    assert term[(0, (0,))] == Fraction(1, 240)
    assert [term[(Q_SCALE * n, (0,))] for n in range(1, 4)] == [sigma(3, n) for n in range(1, 4)]


def test_grit_terms_are_hecke_images():
    phi = theta_block(ThetaBlockSpec.of_lattice("D4"), Q_SCALE * 5)
    series = grit(phi, 3, 3)
    assert series.weight == 8
    assert series.terms[1].same_as(phi)
    assert series.terms[2].same_as(hecke(phi, 2))
    assert fj_symmetry_check(series).ok


def test_grit_input_checks():
    spec = ThetaBlockSpec.of_lattice("D4")
    with pytest.raises(InsufficientPrecision):
        grit(theta_block(spec, Q_SCALE), 3, 3)
    block25 = theta_block(ThetaBlockSpec.classical({0: 4, 1: 4, 2: 3, 3: 2, 4: 1}), Q_SCALE * 3)
    with pytest.raises(OrthoformsError):
        grit(block25, 2, 2)


def test_borch_weight_and_leading_term(psi_a1):
    series = borch(psi_a1, 3, 3)
    assert series.weight == 10
    assert not series.terms[0].coeffs
    assert series.terms[1].valuation == Q_SCALE
    assert fj_symmetry_check(series).ok


@pytest.fixture(scope="module")
def d3_inputs():
    # the D3 block and the A3 block written on D3 through the spinor frame
    lattice = build("D3")
    spinor = ThetaBlockSpec(lattice, ((0, 0, 1), (1, 0, -1), (-1, 1, 0), (0, -1, 0)), 12, Fraction(1))
    return psi_from_block(ThetaBlockSpec.of_lattice(lattice), 3), psi_from_block(spinor, 3)


def test_borch_leading_term_follows_orientation(psi_a1):
    spec = ThetaBlockSpec.of_lattice("A1")
    block = theta_block(spec, Q_SCALE * 3)
    oriented = borch(psi_a1, 2, 3, orientation=[tuple(2 * x for x in f) for f in spec.factors])
    assert oriented.terms[1].same_as(block)
    assert borch(psi_a1, 2, 3).terms[1].same_as(block.scale(-1))


@pytest.mark.slow
def test_borch_is_multiplicative(d3_inputs):
    first, second = d3_inputs
    assert first.layer(0) != second.layer(0)
    assert xi_order(first) == xi_order(second) == 1
    combined = borch(first + second, 4, 3)
    assert combined.weight == 17
    assert combined.same_as(borch(first, 4, 3) * borch(second, 4, 3))


def test_borch_log_round_trip(psi_a1):
    series = borch(psi_a1, 4, 3)
    logs = borch_log(series, xi_order(psi_a1))
    assert len(logs) == 3
    for m in range(1, len(logs)):
        assert logs[m].same_as(-hecke(psi_a1, m))


def test_borch_input_checks(psi_a1):
    with pytest.raises(NegativeXiOrder):
        borch(-psi_a1, 3, 3)
    with pytest.raises(OrthoformsError):
        borch(theta_block(ThetaBlockSpec.of_lattice("A1"), Q_SCALE * 3), 3, 3)


@pytest.mark.slow
@pytest.mark.parametrize("lattice", ["D1", "D2", "D3", "D4", "A1", "A2", "A3"])
def test_theta_identity(lattice):
    report = verify_theta_identity(ThetaBlockSpec.of_lattice(lattice), 3, 3)
    assert report.compared > 0
    assert report.mismatches == []
    assert report.equal
    assert report.symmetry_ok
