"""The three lattice families with free meromorphic algebras, plus the predicted E-type list."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import FamilyViolation
from .lattice import Component, Lattice, RootLatticeSpec, build, parse_split

A_TYPE, AD_TYPE, AE_TYPE, PREDICTED = "A", "AD", "AE", "predicted"

AE_ENTRIES = ("0:E6", "A1:E6", "A2:E6", "0:E7", "A1:E7")
PREDICTED_ENTRIES = (
    "2A1:E6", "3A1:E6", "A1+A2:E6", "A1+A3:E6", "2A2:E6", "A3:E6", "A4:E6", "A5:E6",
    "2A1:E7", "3A1:E7", "A1+A2:E7", "A1+A3:E7", "A2:E7", "2A2:E7", "A3:E7", "A4:E7", "A5:E7",
)


def canonical(spec: RootLatticeSpec) -> RootLatticeSpec:
    return RootLatticeSpec(tuple(sorted(spec.components)))


@dataclass(frozen=True)
class FamilyEntry:
    l0: RootLatticeSpec
    l1: Component
    family: str

    @property
    def label(self) -> str:
        return f"{self.l0}:{self.l1.label}"

    @property
    def predicted(self) -> bool:
        return self.family == PREDICTED

    @property
    def a_ranks(self) -> tuple[int, ...]:
        return tuple(c.rank for c in self.l0.components)

    @cached_property
    def lattice(self) -> Lattice:
        return build(self.l0 + RootLatticeSpec((self.l1,)))

    def __str__(self) -> str:
        return self.label


def _size(ranks: tuple[int, ...]) -> int:
    return sum(m + 1 for m in ranks)


def classify_pair(l0: RootLatticeSpec, l1: RootLatticeSpec) -> str:
    """Family tag of an ``L0:L1`` split, or :class:`FamilyViolation`."""
    l0 = canonical(l0)
    if len(l1.components) != 1:
        raise FamilyViolation(f"L1 must be irreducible, got {l1}")
    (c1,) = l1.components
    if any(c.family != "A" or c.rescale != 1 for c in l0.components) or c1.rescale != 1:
        raise FamilyViolation(f"L0 must be a sum of A-type root lattices, got {l0}")
    label = f"{l0}:{c1.label}"
    ranks = tuple(c.rank for c in l0.components)
    if c1.family == "A":
        if c1.rank + 1 + _size(ranks) <= 11:
            return A_TYPE
    elif c1.family == "D":
        if c1.rank >= 4 and c1.rank + _size(ranks) <= 11:
            return AD_TYPE
    elif c1.rank == 8:
        raise FamilyViolation("E8 is excluded: its Weyl-invariant Jacobi ring is not polynomial")
    elif label in AE_ENTRIES:
        return AE_TYPE
    elif label in PREDICTED_ENTRIES:
        return PREDICTED
    raise FamilyViolation(f"{label} lies outside the three families")


def entry(text: str) -> FamilyEntry:
    l0, l1 = parse_split(text)
    family = classify_pair(l0, l1)
    return FamilyEntry(canonical(l0), l1.components[0], family)


def _partitions(budget: int, min_part: int = 2) -> list[tuple[int, ...]]:
    """Multisets of parts ``m_j + 1 >= 2`` summing to at most ``budget``, ascending."""
    out: list[tuple[int, ...]] = [()]
    for first in range(min_part, budget + 1):
        out.extend((first,) + rest for rest in _partitions(budget - first, first))
    return out


def _l0(parts: tuple[int, ...]) -> RootLatticeSpec:
    return RootLatticeSpec(tuple(Component("A", p - 1) for p in parts))


def _sort_key(e: FamilyEntry) -> tuple[int, tuple[int, ...]]:
    return (len(e.a_ranks), e.a_ranks)


def enumerate_families(include_predicted: bool = False) -> list[FamilyEntry]:
    """All 147 entries (97 A-type, 45 AD-type, 5 AE-type), canonically ordered."""
    out: list[FamilyEntry] = []
    for m in range(1, 11):
        group = [FamilyEntry(_l0(p), Component("A", m), A_TYPE) for p in _partitions(11 - (m + 1))]
        out.extend(sorted(group, key=_sort_key))
    for m in range(4, 12):
        group = [FamilyEntry(_l0(p), Component("D", m), AD_TYPE) for p in _partitions(11 - m)]
        out.extend(sorted(group, key=_sort_key))
    out.extend(entry(text) for text in AE_ENTRIES)
    if include_predicted:
        out.extend(entry(text) for text in PREDICTED_ENTRIES)
    return out
