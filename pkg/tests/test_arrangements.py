from fractions import Fraction

import pytest

from orthoforms.arrangements import (
    CUSTOM,
    L0_PART,
    a_sequence,
    arrangement_of,
    bucket,
    build_arrangement,
    codimension_bound,
    gram_bound,
    looijenga_check,
    pairing_lifts,
    restrict_norm,
)
from orthoforms.errors import FamilyViolation, OrthoformsError
from orthoforms.families import enumerate_families
from orthoforms.lattice import build


def test_a_sequence():
    assert [a_sequence(k) for k in range(1, 6)] == [
        Fraction(1, 4), Fraction(1, 3), Fraction(3, 8), Fraction(2, 5), Fraction(5, 12),
    ]
    assert all(a_sequence(k) == Fraction(k, 2 * k + 2) for k in range(12))


@pytest.mark.parametrize("k", range(2, 9))
def test_restriction_steps_down_the_sequence(k):
    assert restrict_norm(a_sequence(k)) == a_sequence(k - 1)


def test_small_discriminants_do_not_self_intersect():
    assert restrict_norm(Fraction(1, 4)) is None
    assert restrict_norm(Fraction(1, 10)) is None
    with pytest.raises(OrthoformsError):
        restrict_norm(Fraction(3, 4))


@pytest.mark.parametrize(
    "a, k",
    [(Fraction(1, 8), 1), (Fraction(1, 4), 1), (Fraction(3, 11), 2), (Fraction(1, 3), 2), (Fraction(4, 11), 3)],
)
def test_bucket(a, k):
    assert bucket(a) == k


def test_d9_certificate():
    cert = looijenga_check(build_arrangement("0:D9"))
    assert cert.verdict == "pass"
    assert cert.l == 11
    assert cert.buckets == {1: 1}
    assert cert.weighted_sum == 1
    assert cert.margin == 8
    assert cert.codimension_bound == 1


@pytest.mark.parametrize("label, codim", [("0:D9", 1), ("0:D10", 2), ("0:D11", 3)])
def test_codimension_bounds(label, codim):
    assert codimension_bound(build_arrangement(label)) == codim


def test_l0_divisors_are_listed_but_not_counted():
    arrangement = build_arrangement("2A1:A1")
    assert len(arrangement.part(L0_PART)) == 2
    assert all(d.a == Fraction(1, 4) for d in arrangement.part(L0_PART))
    cert = looijenga_check(arrangement)
    assert sum(cert.buckets.values()) == len(arrangement.divisors) - 2


def test_custom_divisor_outside_buckets_is_inconclusive():
    vector_class = next(c for c in build("D9").discriminant_classes if c.delta == 1)
    arrangement = build_arrangement("0:D9").with_divisor(Fraction(1, 2), vector_class.representative.coords)
    assert arrangement.part(CUSTOM)[0].bucket is None
    assert looijenga_check(arrangement).verdict == "inconclusive"


def test_empty_heegner_divisor_is_rejected():
    vector_class = next(c for c in build("D9").discriminant_classes if c.delta == 1)
    with pytest.raises(OrthoformsError):
        build_arrangement("0:D9").with_divisor(Fraction(1, 3), vector_class.representative.coords)


def test_unlisted_split_needs_opt_in():
    with pytest.raises(FamilyViolation):
        build_arrangement("9A1:A1")
    with pytest.raises(FamilyViolation):
        build_arrangement("D4:A1", strict=False)


def test_koecher_violation_fails():
    arrangement = build_arrangement("9A1:A1", strict=False)
    cert = looijenga_check(arrangement)
    assert cert.verdict == "fail"
    assert cert.buckets[1] == 252
    assert cert.clique_sum is None


@pytest.mark.slow
def test_every_family_arrangement_passes():
    for family_entry in enumerate_families():
        arrangement = arrangement_of(family_entry)
        cert = looijenga_check(arrangement)
        assert cert.verdict == "pass", family_entry.label
        counted = [k for k, b in cert.buckets.items() for _ in range(b)]
        assert max(counted, default=0) <= codimension_bound(arrangement) <= cert.weighted_sum
        assert codimension_bound(arrangement) < cert.bound


def test_a2_a4_a2_needs_the_gram_search():
    arrangement = build_arrangement("A2+A4:A2")
    cert = looijenga_check(arrangement)
    assert cert.buckets == {1: 4, 2: 4}
    assert cert.weighted_sum == 12
    assert cert.clique_sum == 8 == cert.bound
    assert cert.verdict == "pass"
    assert cert.gram_rank is not None and cert.gram_rank < cert.bound
    assert codimension_bound(arrangement) == cert.gram_rank


def test_four_wide_divisors_never_meet():
    # one normal from each of the four delta = 38/15 classes gives a singular Gram matrix
    arrangement = build_arrangement("A2+A4:A2")
    wide = tuple(d for d in arrangement.divisors if d.a == Fraction(4, 15))
    assert len(wide) == 4
    assert all(pairing_lifts(arrangement.lattice, d, e) for d in wide for e in wide)
    assert gram_bound(arrangement, wide, 8) == 3


def test_same_divisor_normals_pair_at_2a_minus_1():
    arrangement = build_arrangement("A2+A4:A2")
    wide = next(d for d in arrangement.divisors if d.a == Fraction(4, 15))
    narrow = next(d for d in arrangement.divisors if d.a == Fraction(1, 15))
    assert pairing_lifts(arrangement.lattice, wide, wide) == [Fraction(-7, 15)]
    assert pairing_lifts(arrangement.lattice, narrow, narrow) == []
    assert gram_bound(arrangement, (wide,), 8) == 2
