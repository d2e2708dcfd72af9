"""Heegner-divisor arrangements on ``2U + L`` and the Looijenga-condition certificate.

Divisors are kept as pairs ``(a, gamma)``: the discriminant ``a`` and a class
``gamma`` of ``L'/L`` (identified with ``-gamma``). Hyperplanes are never
materialized.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .constants import CLIQUE_LIMIT
from .errors import FamilyViolation, OrthoformsError
from .families import FamilyEntry, canonical, entry
from .lattice import CosetClass, Lattice, RootLatticeSpec, parse_split
from .models import HeegnerRow, LooijengaCertificate

logger = logging.getLogger(__name__)

L0_PART, L1_PART, CUSTOM = "L0", "L1", "custom"
UNLISTED = "unlisted"
HALF = Fraction(1, 2)


def a_sequence(k: int) -> Fraction:
    """``a_0 = 0``, ``a_k = 1 / (4 - 4 a_{k-1})``; equals ``k / (2k + 2)``."""
    if k < 0:
        raise OrthoformsError(f"a_k needs k >= 0, got {k}")
    a = Fraction(0)
    for _ in range(k):
        a = 1 / (4 - 4 * a)
    return a


def bucket(a: Fraction) -> int:
    """Minimal ``k >= 1`` with ``a <= a_k``."""
    if not 0 < a < HALF:
        raise OrthoformsError(f"bucket needs 0 < a < 1/2, got {a}")
    k, current = 1, Fraction(1, 4)
    while a > current:
        k += 1
        current = 1 / (4 - 4 * current)
    return k


def restrict_norm(a: Fraction) -> Fraction | None:
    """Discriminant of the restriction of ``H(a, -)`` to one of its own hyperplanes.

    ``None`` when ``a <= 1/4``: two distinct hyperplanes of such a divisor never meet.
    """
    if a > HALF:
        raise OrthoformsError(f"restriction is only described for a <= 1/2, got {a}")
    if a <= Fraction(1, 4):
        return None
    return 1 - 1 / (4 * a)


@dataclass(frozen=True)
class HeegnerDivisor:
    a: Fraction
    gamma: CosetClass
    tag: str
    primitive: bool = False

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise OrthoformsError(f"Heegner discriminant must be positive, got {self.a}")
        if (self.gamma.delta / 2 - self.a).denominator != 1:
            raise OrthoformsError(f"H({self.a}, {self.gamma.representative}) is empty: a - <v,v>/2 is not integral")

    @property
    def bucket(self) -> int | None:
        return bucket(self.a) if self.a < HALF else None

    def row(self) -> HeegnerRow:
        return HeegnerRow(a=self.a, gamma=str(self.gamma.representative), tag=self.tag, bucket=self.bucket)


@dataclass(frozen=True)
class Arrangement:
    lattice: Lattice
    split: str
    divisors: tuple[HeegnerDivisor, ...] = field(default_factory=tuple)
    predicted: bool = False

    @property
    def l(self) -> int:
        return self.lattice.rank + 2

    def part(self, tag: str) -> tuple[HeegnerDivisor, ...]:
        return tuple(d for d in self.divisors if d.tag == tag)

    def with_divisor(self, a: Fraction, coords: tuple[Fraction, ...]) -> "Arrangement":
        divisor = HeegnerDivisor(Fraction(a), self.lattice.class_of(coords), CUSTOM)
        return Arrangement(self.lattice, self.split, self.divisors + (divisor,), self.predicted)


def _negative_key(cls: CosetClass) -> tuple[Fraction, ...]:
    return tuple((-c) % 1 for c in cls.key)


def build_arrangement(l0: RootLatticeSpec | str, l1: RootLatticeSpec | None = None, *,
                      strict: bool = True) -> Arrangement:
    """``H_{L,0}`` (one divisor per A-component of ``L0``) and ``H_{L,1}`` (classes with ``delta > 2``).

    With ``strict=False`` a split outside the families is accepted as long as
    ``L0`` is a sum of ``A``-type lattices and ``L1`` is irreducible.
    """
    text = l0 if isinstance(l0, str) else _split_text(l0, l1)
    try:
        family_entry = entry(text)
    except FamilyViolation:
        if strict:
            raise
        family_entry = _unlisted(text)
    return arrangement_of(family_entry)


def _split_text(l0: RootLatticeSpec, l1: RootLatticeSpec | None) -> str:
    if l1 is None:
        raise OrthoformsError("an L0:L1 split is required")
    return f"{l0}:{l1}"


def _unlisted(text: str) -> FamilyEntry:
    l0, l1 = parse_split(text)
    if len(l1.components) != 1 or any(c.family != "A" for c in l0.components):
        raise FamilyViolation(f"{text}: L0 must be of A-type and L1 irreducible")
    logger.info("%s lies outside the three families", text)
    return FamilyEntry(canonical(l0), l1.components[0], UNLISTED)


def arrangement_of(family_entry: FamilyEntry) -> Arrangement:
    lattice = family_entry.lattice
    divisors: list[HeegnerDivisor] = []
    for component, offset in lattice.blocks[: len(family_entry.l0.components)]:
        pairing = [0] * lattice.rank
        pairing[offset] = 1
        cls = lattice.class_of(lattice.from_pairing(pairing))
        divisors.append(HeegnerDivisor(cls.delta / 2, cls, L0_PART))
    seen: set[tuple[Fraction, ...]] = set()
    for cls in lattice.discriminant_classes:
        if cls.delta <= 2 or cls.key in seen:
            continue
        seen.add(cls.key)
        seen.add(_negative_key(cls))
        divisors.append(HeegnerDivisor(cls.delta / 2 - 1, cls, L1_PART))
    logger.debug("%s: %d + %d divisors", family_entry.label,
                 sum(d.tag == L0_PART for d in divisors), sum(d.tag == L1_PART for d in divisors))
    return Arrangement(lattice, family_entry.label, tuple(divisors), family_entry.predicted)


# ── the Looijenga certificate ────────────────────────────────────────────────


def pairing_lifts(lattice: Lattice, d1: HeegnerDivisor, d2: HeegnerDivisor) -> list[Fraction]:
    """Values ``(u, v)`` can take for normals ``u`` of ``d1`` and ``v`` of ``d2`` spanning a positive plane.

    Both normals are taken in their divisor's own class, so ``(u, v)`` lies in
    ``r + Z`` with ``r`` the discriminant pairing, and ``(u, v)^2 < 4 a1 a2``.
    """
    r = lattice.bilinear(d1.gamma.representative.coords, d2.gamma.representative.coords) % 1
    bound = 4 * d1.a * d2.a
    return [x for x in (r, r - 1) if x * x < bound]


def compatible(lattice: Lattice, d1: HeegnerDivisor, d2: HeegnerDivisor) -> bool:
    """Whether hyperplanes of the two divisors can meet: ``min(r, 1 - r)^2 < 4 a1 a2``."""
    return bool(pairing_lifts(lattice, d1, d2))


def _max_weighted_clique(weights: list[int], adjacent: list[set[int]]) -> int:
    best = 0

    def grow(chosen_weight: int, candidates: list[int]) -> None:
        nonlocal best
        best = max(best, chosen_weight)
        if chosen_weight + sum(weights[i] for i in candidates) <= best:
            return
        for pos, i in enumerate(candidates):
            grow(chosen_weight + weights[i], [j for j in candidates[pos + 1:] if j in adjacent[i]])

    grow(0, sorted(range(len(weights)), key=lambda i: -weights[i]))
    return best


def clique_bound(arrangement: Arrangement, divisors: tuple[HeegnerDivisor, ...]) -> int | None:
    """Largest bucket sum over pairwise compatible divisors; ``None`` above ``CLIQUE_LIMIT``."""
    if len(divisors) > CLIQUE_LIMIT:
        return None
    weights = [d.bucket or 0 for d in divisors]
    adjacent = [
        {j for j in range(len(divisors)) if j != i and compatible(arrangement.lattice, divisors[i], divisors[j])}
        for i in range(len(divisors))
    ]
    return _max_weighted_clique(weights, adjacent)


def _extend_ldl(rows: list[list[Fraction]], pivots: list[Fraction], pairings: tuple[Fraction, ...],
                diagonal: Fraction) -> tuple[Fraction, list[Fraction]]:
    """Next pivot and row of ``G = L D L^T`` when ``G`` gains one vector."""
    coeffs: list[Fraction] = []
    for k, g in enumerate(pairings):
        acc = g - sum((coeffs[j] * rows[k][j] * pivots[j] for j in range(k)), Fraction(0))
        coeffs.append(acc / pivots[k])
    return diagonal - sum((c * c * p for c, p in zip(coeffs, pivots)), Fraction(0)), coeffs


def gram_bound(arrangement: Arrangement, divisors: tuple[HeegnerDivisor, ...], target: int) -> int | None:
    """Most hyperplane normals from ``divisors`` with a positive-definite Gram matrix, capped at ``target``.

    A divisor of bucket ``k`` offers up to ``k`` normals. Entries of the Gram
    matrix range over ``pairing_lifts``; the search stops as soon as ``target``
    normals are placed. ``None`` above ``CLIQUE_LIMIT``.
    """
    if len(divisors) > CLIQUE_LIMIT:
        return None
    lattice = arrangement.lattice
    slots = [(i, copy) for i, d in enumerate(divisors) for copy in range(d.bucket or 0)]
    lifts = {
        (i, j): pairing_lifts(lattice, divisors[i], divisors[j])
        for i in range(len(divisors)) for j in range(i, len(divisors))
    }
    best = 0

    def grow(chosen: list[int], rows: list[list[Fraction]], pivots: list[Fraction], start: int) -> None:
        nonlocal best
        best = max(best, len(chosen))
        if best >= target or len(chosen) + len(slots) - start <= best:
            return
        for pos in range(start, len(slots)):
            i, copy = slots[pos]
            if chosen.count(i) != copy:
                continue
            options = [lifts[min(i, j), max(i, j)] for j in chosen]
            for pairings in product(*options):
                pivot, row = _extend_ldl(rows, pivots, pairings, 2 * divisors[i].a)
                if pivot > 0:
                    grow(chosen + [i], rows + [row], pivots + [pivot], pos + 1)
                    if best >= target:
                        return

    grow([], [], [], 0)
    return best


def _counted(arrangement: Arrangement) -> tuple[HeegnerDivisor, ...]:
    # only H_{L,1} enters the intersection count
    return tuple(d for d in arrangement.divisors if d.tag != L0_PART)


def codimension_bound(arrangement: Arrangement) -> int:
    """Largest codimension of a nonempty intersection the bucket calculus allows.

    The compatibility clique is sharpened by the Gram search once it reaches ``l - 2``.
    """
    divisors = tuple(d for d in _counted(arrangement) if d.bucket is not None)
    bound = clique_bound(arrangement, divisors)
    if bound is None:
        return sum(d.bucket or 0 for d in divisors)
    if bound >= arrangement.l - 2:
        return gram_bound(arrangement, divisors, bound) or 0
    return bound


def looijenga_check(arrangement: Arrangement) -> LooijengaCertificate:
    counted = _counted(arrangement)
    usable = tuple(d for d in counted if d.bucket is not None)
    buckets: dict[int, int] = {}
    for d in usable:
        assert d.bucket is not None
        buckets[d.bucket] = buckets.get(d.bucket, 0) + 1
    weighted = sum(k * b for k, b in buckets.items())
    limit = arrangement.l - 2
    clique: int | None = None
    gram: int | None = None
    if weighted < limit:
        verdict = "pass"
    else:
        clique = clique_bound(arrangement, usable)
        if clique is not None and clique >= limit:
            gram = gram_bound(arrangement, usable, limit)
        finest = clique if gram is None else gram
        verdict = "pass" if finest is not None and finest < limit else "fail"
    if len(usable) < len(counted) and verdict == "pass":
        # a >= 1/2 lies outside the bucket calculus
        verdict = "inconclusive"
    if verdict != "pass":
        logger.warning("%s: Looijenga check %s (sum %d, clique %s, gram %s, bound %d)",
                       arrangement.split, verdict, weighted, clique, gram, limit)
    return LooijengaCertificate(
        lattice=arrangement.split,
        l=arrangement.l,
        verdict=verdict,
        buckets=dict(sorted(buckets.items())),
        weighted_sum=weighted,
        clique_sum=clique,
        gram_rank=gram,
        bound=limit,
        divisors=[d.row() for d in arrangement.divisors],
        codimension_bound=codimension_bound(arrangement),
    )


def delta_bound_check(lattice: Lattice) -> bool:
    """``delta_L < 3``, certified by coset enumeration."""
    return lattice.delta < 3


