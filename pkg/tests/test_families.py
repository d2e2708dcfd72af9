from collections import Counter

import pytest

from orthoforms.errors import FamilyViolation
from orthoforms.families import AE_ENTRIES, PREDICTED_ENTRIES, entry, enumerate_families
from orthoforms.table_data import appendix_rows


def test_family_sizes():
    entries = enumerate_families()
    assert len(entries) == 147
    assert Counter(e.family for e in entries) == {"A": 97, "AD": 45, "AE": 5}
    assert len({e.label for e in entries}) == 147


def test_predicted_entries_are_appended():
    entries = enumerate_families(include_predicted=True)
    assert len(entries) == 147 + len(PREDICTED_ENTRIES)
    assert all(e.predicted for e in entries[147:])


def test_enumeration_matches_reference_rows():
    labels = [e.label for e in enumerate_families(include_predicted=True)]
    assert sorted(labels) == sorted(f"{r.l0}:{r.l1}" for r in appendix_rows())


@pytest.mark.parametrize(
    "text, family",
    [("0:A1", "A"), ("A2+A1:A3", "A"), ("A1:D9", "AD"), ("A2:E6", "AE"), ("A5:E7", "predicted")],
)
def test_entry_classification(text, family):
    assert entry(text).family == family


def test_entry_is_canonical():
    assert entry("A2+A1:A1").label == "A1+A2:A1"


@pytest.mark.parametrize("text", ["9A1:A1", "0:E8", "A1:D3", "D4:A1", "0:A1+A1", "A6:E6"])
def test_violations(text):
    with pytest.raises(FamilyViolation):
        entry(text)


def test_ae_entries_are_listed():
    assert {e.label for e in enumerate_families() if e.family == "AE"} == set(AE_ENTRIES)
