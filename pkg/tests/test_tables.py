import pytest

from orthoforms.errors import OrthoformsError
from orthoforms.families import FamilyEntry, enumerate_families
from orthoforms.lattice import Component, RootLatticeSpec
from orthoforms.table_data import appendix_rows, norm2_table
from orthoforms.tables import (
    APPENDIX_COLUMNS,
    abelian_weights,
    check_tables,
    closed_jacobian_weight,
    generator_weights,
    jacobian_weight,
    norm2_classification,
    principal_part,
    rows_to_frame,
    sum_rule,
)

KNOWN_ERRATA = {"A2:E6", "A1+A2:D6", "A4:D6", "A3:D7"}


def test_reference_rows_reproduce():
    checks = check_tables()
    assert len(checks) == 164
    assert [c.row for c in checks if c.status == "disagree"] == []
    assert {c.row for c in checks if c.status == "erratum"} == KNOWN_ERRATA


def test_predicted_rows_are_flagged():
    rows = appendix_rows()
    assert sum(r.predicted for r in rows) == 17
    assert not any(r.predicted for r in rows[:147])


@pytest.mark.parametrize("rank, weights", [(1, [2]), (2, [1, 3]), (3, [1, 2, 4]), (5, [1, 2, 3, 4, 6])])
def test_abelian_weights(rank, weights):
    assert abelian_weights(rank) == weights


def test_first_row():
    row = generator_weights("0:A1")
    assert row.eisenstein == [4, 6]
    assert row.abelian == []
    assert row.jacobi == [10, 12]
    assert row.jacobian_weight == 35


def test_erratum_row_recomputed():
    row = generator_weights("A2:E6")
    assert row.abelian == [1, 3]
    assert row.jacobi == [4, 7, 9, 9, 10, 12, 15]
    assert row.jacobian_weight == 90


def test_predicted_row():
    row = generator_weights("3A1:E7")
    assert row.family == "predicted"
    assert row.jacobi == [2, 4, 4, 4, 6, 6, 6, 6]
    assert row.jacobian_weight == 66


def test_nonpositive_jacobi_weights_are_rejected():
    crowded = FamilyEntry(RootLatticeSpec.parse("9A1"), Component("A", 1), "unlisted")
    with pytest.raises(OrthoformsError):
        generator_weights(crowded)


def test_sum_rule_full_group_variant():
    assert sum_rule([2, 4, 4, 6, 6, 8, 10, 12], 7) == 59


@pytest.mark.parametrize("label, k", [("0:D11", 142), ("0:A1", 35), ("A1:A8", 69), ("3A1:E7", 66)])
def test_jacobian_weight_routes_agree(label, k):
    weights = jacobian_weight(label)
    assert weights.k_formula == weights.k_solver == weights.k_sumrule == k
    assert closed_jacobian_weight(label) == k


@pytest.mark.slow
def test_jacobian_weight_for_every_entry():
    for family_entry in enumerate_families(include_predicted=True):
        weights = jacobian_weight(family_entry)
        assert weights.k_formula == weights.k_solver == weights.k_sumrule, family_entry.label


@pytest.mark.parametrize(
    "label, multiplicities",
    [("A1:A1", [0]), ("A2:A1", [-1]), ("A1+A2:A3", [4, 1]), ("0:D4", [])],
)
def test_principal_part_multiplicities(label, multiplicities):
    part = principal_part(label)
    assert part.multiplicities == multiplicities
    assert part.k == generator_weights(label).jacobian_weight


def test_norm2_classification_matches_reference():
    found = [str(spec) for spec in norm2_classification()]
    assert len(found) == 40
    assert sorted(found) == sorted(norm2_table().lattices)
    assert "2D4" in found
    assert "A8" not in found


def test_norm2_groups():
    groups = norm2_table().groups
    assert {k: len(v) for k, v in groups.items()} == {"A": 22, "D": 6, "AD": 7, "E": 2, "AE": 3}


def test_rows_to_frame_uses_appendix_layout():
    rows = [generator_weights("0:A1"), generator_weights("A1:A1")]
    frame = rows_to_frame(rows)
    assert list(frame.columns) == list(APPENDIX_COLUMNS)
    assert frame.iloc[0].tolist() == ["0", "A1", "4, 6", "-", "10, 12", 35]
    assert frame.iloc[1]["abelian"] == "2"


def test_rows_to_frame_empty():
    assert list(rows_to_frame([]).columns) == list(APPENDIX_COLUMNS)
