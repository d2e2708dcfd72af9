from fractions import Fraction

import pytest

from orthoforms.constants import Q_SCALE
from orthoforms.errors import InsufficientPrecision, NonExactDivision, OrthoformsError, QOrderMismatch
from orthoforms.jacobi import (
    JacobiExpansion,
    ThetaBlockSpec,
    certification_bound,
    classify,
    divide_exact,
    hecke,
    hecke_double_coset,
    parity_check,
    periodicity_check,
    q_count,
    theta_block,
    theta_factor,
    theta_factor_product,
)
from orthoforms.jacobi import _root_powers
from orthoforms.lattice import build

INDEX_25 = {0: 4, 1: 4, 2: 3, 3: 2, 4: 1}


@pytest.fixture(scope="module")
def block25():
    spec = ThetaBlockSpec.classical(INDEX_25)
    shell = JacobiExpansion.zero(spec.lattice, spec.weight, spec.computed_index(), 0)
    return theta_block(spec, max(Q_SCALE * 3, certification_bound(shell)))


def test_index_25_block_invariants(block25):
    spec = ThetaBlockSpec.classical(INDEX_25)
    assert spec.weight == 2
    assert spec.q_order == 1
    assert spec.computed_index() == 25
    assert block25.index == 25
    assert block25.valuation == Q_SCALE


def test_index_25_block_is_holomorphic(block25):
    # vanishes at q^0, yet the verdict set has no separate cusp-form label
    assert block25.valuation > 0
    assert classify(block25) == "holomorphic"


def test_classify_refuses_short_expansions(block25):
    with pytest.raises(InsufficientPrecision):
        classify(block25.truncate(Q_SCALE))


def test_triple_product_matches_alternating_sum():
    lattice = build("A1")
    prec = Q_SCALE * 10
    by_sum = theta_factor(lattice, (1,), prec)
    by_product = theta_factor_product(lattice, (1,), prec)
    assert by_sum.prec == by_product.prec == prec
    assert by_sum.coeffs == by_product.coeffs


@pytest.mark.parametrize("lattice", ["A2", "D4"])
def test_own_theta_blocks_have_q_order_one(lattice):
    spec = ThetaBlockSpec.of_lattice(lattice)
    assert spec.q_order == 1
    assert spec.computed_index() == 1
    phi = theta_block(spec, Q_SCALE * 3)
    assert phi.valuation == Q_SCALE
    assert not phi.half_dual


def test_block_without_index_is_rejected():
    spec = ThetaBlockSpec(build("A2"), ((1, 0),), 0)
    assert spec.computed_index() is None
    with pytest.raises(QOrderMismatch):
        theta_block(spec, Q_SCALE)


def _blocks():
    yield ThetaBlockSpec.classical(INDEX_25)
    yield ThetaBlockSpec.of_lattice("A2")
    yield ThetaBlockSpec.of_lattice("D4")


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("spec", list(_blocks()), ids=["A1-25", "A2", "D4"])
def test_hecke_matches_double_coset(spec, m):
    phi = theta_block(spec, Q_SCALE * (3 * m + 1))
    direct = hecke(phi, m)
    reference = hecke_double_coset(phi, m)
    assert direct.index == phi.index * m
    assert direct.prec == reference.prec
    assert direct.coeffs == reference.coeffs


def test_hecke_one_is_identity(block25):
    assert hecke(block25, 1).coeffs == block25.coeffs


def test_hecke_rejects_bad_input(block25):
    with pytest.raises(OrthoformsError):
        hecke(block25, 0)
    half = theta_factor(build("A1"), (1,), Q_SCALE * 2)
    with pytest.raises(OrthoformsError):
        hecke(half, 2)


def test_hecke_four_through_cyclotomic_cosets():
    phi = theta_block(ThetaBlockSpec.of_lattice("A2"), Q_SCALE * 9)
    direct = hecke(phi, 4)
    reference = hecke_double_coset(phi, 4)
    assert reference.prec == direct.prec
    assert reference.coeffs == direct.coeffs


def test_root_powers_reduce_modulo_the_cyclotomic_polynomial():
    # zeta_3^2 = -1 - zeta_3
    assert _root_powers(3) == ((1, 0), (0, 1), (-1, -1))
    assert _root_powers(2) == ((1,), (-1,))


def test_hecke_refuses_a_precision_the_input_cannot_support(block25):
    available = -((-q_count(block25.prec)) // 2)
    with pytest.raises(InsufficientPrecision):
        hecke(block25, 2, Q_SCALE * (available + 1))
    image = hecke(block25, 2, Q_SCALE * available)
    assert image.prec == Q_SCALE * available
    assert image.coeffs == hecke(block25, 2).coeffs


@pytest.mark.parametrize("spec", list(_blocks()), ids=["A1-25", "A2", "D4"])
def test_parity(spec):
    assert parity_check(theta_block(spec, Q_SCALE * 3))


@pytest.mark.parametrize("lattice", ["A2", "D4"])
def test_periodicity_of_blocks_and_hecke_images(lattice):
    phi = theta_block(ThetaBlockSpec.of_lattice(lattice), Q_SCALE * 5)
    assert periodicity_check(phi) == []
    assert periodicity_check(hecke(phi, 2)) == []


def test_exact_division_round_trip():
    lattice = build("A1")
    prec = Q_SCALE * 4
    a = theta_factor(lattice, (1,), prec)
    b = theta_factor(lattice, (3,), prec)
    quotient = divide_exact(a * b, b)
    assert quotient.prec == prec
    assert quotient.same_as(a)


def test_division_with_remainder_raises():
    lattice = build("A1")
    with pytest.raises(NonExactDivision):
        divide_exact(theta_factor(lattice, (1,), Q_SCALE * 2), theta_factor(lattice, (2,), Q_SCALE * 2))


def test_text_and_json_export():
    phi = theta_factor(build("A1"), (1,), Q_SCALE)
    assert phi.to_text() == "(-z[(-1/4)] + z[(1/4)])*q^(1/8) + O(q)"
    data = phi.to_json()
    assert data["lattice"] == "A1"
    assert data["prec"] == "1"
    assert {t["zeta"] for t in data["terms"]} == {"(-1/4)", "(1/4)"}
    assert all(t["q"] == "1/8" for t in data["terms"])
