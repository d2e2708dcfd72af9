"""Hilbert–Poincaré series and minimal generators of meromorphic modular-form algebras.

The algebra attached to ``L = L_1 + ... + L_n`` is assembled from the bigraded
polynomial rings of Weyl-invariant weak Jacobi forms of the ``L_i``: the
``xi^t`` part contributes ``x^{12 t} prod_i P_{i,t}(x)`` over
``C[E_4, E_6]``, where ``P_{i,t}`` counts the index-``t`` monomials of the
``i``-th factor by weight.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as cartesian
from math import prod
from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.ring_series import rs_mul, rs_series_inversion
from sympy.polys.rings import ring

from .constants import HILBERT_ORDER, TMAX
from .errors import LatticeSpecError, OrthoformsError
from .lattice import Bigrading, RootLatticeSpec, table_bigradings

logger = logging.getLogger(__name__)

_RING, _X = ring("x", QQ)

WeightCounts = dict[int, int]


# ── power series ─────────────────────────────────────────────────────────────


def expand_rational(numerator: Mapping[int, int], denominator: Sequence[int], order: int) -> list[int]:
    """Coefficients up to ``x^order`` of ``numerator / prod_d (1 - x^d)``."""
    num = _RING.zero
    for exp, coeff in numerator.items():
        num += coeff * _X**exp
    den = prod((1 - _X**d for d in denominator), start=_RING.one)
    series = rs_mul(num, rs_series_inversion(den, _X, order + 1), _X, order + 1)
    return [int(series.get((k,), 0)) for k in range(order + 1)]


def _convolve(a: WeightCounts, b: WeightCounts) -> WeightCounts:
    out: Counter[int] = Counter()
    for ka, ca in a.items():
        for kb, cb in b.items():
            out[ka + kb] += ca * cb
    return dict(out)


# ── bigraded algebras ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class BigradedAlgebra:
    """Tensor product over ``C[E_4, E_6]`` of polynomial Jacobi rings, one per factor."""

    factors: tuple[tuple[Bigrading, ...], ...]
    label: str = ""

    def __post_init__(self) -> None:
        for gens in self.factors:
            if not gens:
                raise OrthoformsError(f"{self.label}: every factor needs generators")
            if any(g.index < 1 for g in gens):
                raise OrthoformsError(f"{self.label}: generator indices must be positive")

    @classmethod
    def of_lattice(cls, spec: RootLatticeSpec | str) -> "BigradedAlgebra":
        spec = RootLatticeSpec.parse(spec) if isinstance(spec, str) else spec
        factors = []
        for component in spec.components:
            if component.family == "E" and component.rank == 8:
                raise LatticeSpecError("E8 is excluded: its Weyl-invariant Jacobi ring is not polynomial")
            gens = table_bigradings(component)
            if not gens:
                raise LatticeSpecError(f"no tabulated Jacobi generators for {component.label}")
            factors.append(gens)
        return cls(tuple(factors), str(spec))

    @classmethod
    def single(cls, bigradings: Iterable[Bigrading], label: str = "custom") -> "BigradedAlgebra":
        return cls((tuple(bigradings),), label)

    @cached_property
    def slope(self) -> Fraction:
        """``12 - sum_i max(-k/m)``: the weight grows at least this fast with the index."""
        return 12 - sum(max(Fraction(-g.weight, g.index) for g in gens) for gens in self.factors)

    def index_bound(self, order: int) -> int:
        if self.slope <= 0:
            raise OrthoformsError(f"{self.label}: weights are unbounded below, no Hilbert series")
        return int(Fraction(order) / self.slope)

    def monomial_counts(self, factor: int, tmax: int) -> list[WeightCounts]:
        """``P_{i,t}`` for ``t <= tmax`` as weight -> count."""
        table: list[Counter[int]] = [Counter() for _ in range(tmax + 1)]
        table[0][0] = 1
        for g in self.factors[factor]:
            for t in range(g.index, tmax + 1):
                for k, c in list(table[t - g.index].items()):
                    table[t][k + g.weight] += c
        return [dict(c) for c in table]


def hilbert_series(algebra: BigradedAlgebra | RootLatticeSpec | str, order: int = HILBERT_ORDER) -> list[int]:
    """``dim M_k`` for ``0 <= k <= order``."""
    if not isinstance(algebra, BigradedAlgebra):
        algebra = BigradedAlgebra.of_lattice(algebra)
    tmax = algebra.index_bound(order)
    per_factor = [algebra.monomial_counts(i, tmax) for i in range(len(algebra.factors))]
    numerator: Counter[int] = Counter()
    for t in range(tmax + 1):
        acc: WeightCounts = {12 * t: 1}
        for counts in per_factor:
            acc = _convolve(acc, counts[t])
        for k, c in acc.items():
            if k <= order:
                numerator[k] += c
    return expand_rational(numerator, (4, 6), order)


def dim_bound(k: int, algebra: BigradedAlgebra | RootLatticeSpec | str) -> int:
    """``sum_t dim J^w_{k - 12t, L, t}``: the dimension bound for weight-``k`` forms."""
    if k < 0:
        return 0
    return hilbert_series(algebra, k)[k]


# ── minimal generators ───────────────────────────────────────────────────────


def _monomials(gens: Sequence[Bigrading], t: int) -> Iterable[tuple[int, ...]]:
    """Exponent vectors of the index-``t`` monomials."""
    def walk(i: int, left: int) -> Iterable[tuple[int, ...]]:
        if i == len(gens):
            if left == 0:
                yield ()
            return
        for e in range(left // gens[i].index + 1):
            for rest in walk(i + 1, left - e * gens[i].index):
                yield (e,) + rest
    return walk(0, t)


def _split_indices(gens: Sequence[Bigrading], exps: tuple[int, ...], t: int) -> frozenset[int]:
    reach = 1
    for g, e in zip(gens, exps):
        for _ in range(e):
            reach |= reach << g.index
    return frozenset(s for s in range(1, t) if reach >> s & 1)


def _groups(gens: Sequence[Bigrading], t: int) -> dict[frozenset[int], Counter[int]]:
    """Index-``t`` monomials grouped by their proper split indices, counted by weight."""
    out: dict[frozenset[int], Counter[int]] = {}
    for exps in _monomials(gens, t):
        key = _split_indices(gens, exps, t)
        weight = sum(g.weight * e for g, e in zip(gens, exps))
        out.setdefault(key, Counter())[weight] += 1
    return out


def minimal_generators(algebra: BigradedAlgebra | RootLatticeSpec | str, tmax: int = TMAX) -> list[int]:
    """Weights of a minimal generating set: ``4, 6`` and ``12 t + k`` for indecomposable tuples."""
    if not isinstance(algebra, BigradedAlgebra):
        algebra = BigradedAlgebra.of_lattice(algebra)
    weights: list[int] = [4, 6]
    productive: list[int] = []
    for t in range(1, tmax + 1):
        found = 0
        groups = [_groups(gens, t) for gens in algebra.factors]
        for combo in cartesian(*(g.items() for g in groups)):
            common = frozenset(range(1, t))
            for splits, _ in combo:
                common &= splits
            if common:
                continue
            counts: WeightCounts = {12 * t: 1}
            for _, by_weight in combo:
                counts = _convolve(counts, by_weight)
            for k, c in counts.items():
                weights.extend([k] * c)
                found += c
        if found:
            productive.append(t)
    if productive and productive[-1] >= tmax - 1:
        logger.warning("%s: generators still appear at index %d; raise the index bound", algebra.label, productive[-1])
    else:
        logger.info("%s: generators stabilize after index %s", algebra.label, productive[-1] if productive else 0)
    return sorted(weights)


def paramodular_bigradings(level: int) -> tuple[Bigrading, ...]:
    """Index-1 generators for ``A1(level)`` from the index-``level`` monomials in the ``A1`` ring.

    The ``A1`` ring is taken with generators of bigradings ``(0,1)``, ``(-2,1)``
    and ``(-1,2)``; each monomial of total index ``level`` counts as index 1.
    """
    if level not in (2, 3):
        raise OrthoformsError(f"paramodular presets exist for levels 2 and 3, got {level}")
    base = (Bigrading(0, 1), Bigrading(-2, 1), Bigrading(-1, 2))
    out = []
    for exps in _monomials(base, level):
        out.append(Bigrading(sum(g.weight * e for g, e in zip(base, exps)), 1))
    return tuple(sorted(out, key=lambda b: -b.weight))


def parse_bigradings(text: str) -> tuple[Bigrading, ...]:
    """``"0:1,-2:1,-4:1"`` -> bigradings."""
    out = []
    for token in text.split(","):
        try:
            weight, index = token.split(":")
            out.append(Bigrading(int(weight), int(index)))
        except ValueError as exc:
            raise OrthoformsError(f"cannot parse bigrading {token!r}; expected weight:index") from exc
    return tuple(out)
