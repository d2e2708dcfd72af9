"""Root lattices, their duals, discriminant classes and root-system invariants.

Everything is exact. Vectors of the dual lattice are handled in two coordinate
systems:

* *basis coordinates* ``c`` (rationals): ``v = sum c_i b_i``;
* *pairing coordinates* ``p = G c`` (integers for ``v`` in ``L'``), i.e. the
  values ``<v, b_i>``. Jacobi-form exponents are stored this way.

The norm of a dual vector is ``c^T G c = p^T G^{-1} p``.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isqrt, prod
from typing import Iterable, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .errors import LatticeSpecError

logger = logging.getLogger(__name__)

IntMatrix = tuple[tuple[int, ...], ...]
RatVector = tuple[Fraction, ...]

_COMPONENT_RE = re.compile(r"^(\d*)([ADE])_?(\d+)(?:\((\d+)\))?$")


# ── specs ────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, order=True)
class Component:
    family: str
    rank: int
    rescale: int = 1

    def __post_init__(self) -> None:
        if self.family not in ("A", "D", "E"):
            raise LatticeSpecError(f"unknown root-lattice family {self.family!r}")
        if self.rank < 1:
            raise LatticeSpecError(f"rank must be positive, got {self.family}{self.rank}")
        if self.family == "E" and self.rank not in (6, 7, 8):
            raise LatticeSpecError(f"E{self.rank} is not a root lattice")
        if self.rescale < 1:
            raise LatticeSpecError(f"rescale must be positive, got {self.rescale}")

    @property
    def label(self) -> str:
        base = f"{self.family}{self.rank}"
        return base if self.rescale == 1 else f"{base}({self.rescale})"


@dataclass(frozen=True)
class RootLatticeSpec:
    components: tuple[Component, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "RootLatticeSpec":
        """Parse ``"A2+2A1+D4"``, ``"A1(2)"`` or ``"0"`` (the zero lattice)."""
        text = text.replace(" ", "").replace("⊕", "+")
        if text in ("", "0"):
            return cls(())
        components: list[Component] = []
        for token in text.split("+"):
            match = _COMPONENT_RE.match(token)
            if match is None:
                raise LatticeSpecError(f"cannot parse lattice component {token!r} in {text!r}")
            mult, family, rank, rescale = match.groups()
            component = Component(family, int(rank), int(rescale) if rescale else 1)
            components.extend([component] * (int(mult) if mult else 1))
        return cls(tuple(components))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    def __add__(self, other: "RootLatticeSpec") -> "RootLatticeSpec":
        return RootLatticeSpec(self.components + other.components)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for component, group in itertools.groupby(self.components):
            count = len(list(group))
            parts.append(f"{count if count > 1 else ''}{component.label}")
        return "+".join(parts)


def parse_split(text: str) -> tuple[RootLatticeSpec, RootLatticeSpec]:
    """Parse an ``"L0:L1"`` decomposition."""
    if ":" not in text:
        raise LatticeSpecError(f"expected an 'L0:L1' split, got {text!r}")
    left, right = text.split(":", 1)
    return RootLatticeSpec.parse(left), RootLatticeSpec.parse(right)


# ── root-system data ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Bigrading:
    """Weight and index of a generator of the Weyl-invariant weak Jacobi ring."""

    weight: int
    index: int
    psi: bool = False

    def __str__(self) -> str:
        tag = " (psi)" if self.psi else ""
        return f"({self.weight},{self.index}){tag}"


@dataclass(frozen=True)
class ComponentInfo:
    component: Component
    coxeter_number: int
    root_count: int
    weyl_bigradings: tuple[Bigrading, ...]


def table_bigradings(component: Component) -> tuple[Bigrading, ...]:
    """Generator bigradings of ``J^{w, W(R)}_{*,R,*}``; empty where not tabulated."""
    n = component.rank
    if component.rescale != 1:
        return ()
    if component.family == "A":
        return (Bigrading(0, 1),) + tuple(Bigrading(-s, 1) for s in range(2, n + 2))
    if component.family == "D":
        if n < 3:
            return ()
        return (
            Bigrading(0, 1),
            Bigrading(-2, 1),
            Bigrading(-4, 1),
            Bigrading(-n, 1, psi=True),
        ) + tuple(Bigrading(-2 * s, 2) for s in range(3, n))
    if n == 6:
        pairs = [(0, 1), (-2, 1), (-5, 1), (-6, 2), (-8, 2), (-9, 2), (-12, 3)]
    elif n == 7:
        pairs = [(0, 1), (-2, 1), (-6, 2), (-8, 2), (-10, 2), (-12, 3), (-14, 3), (-18, 4)]
    else:
        return ()
    return tuple(Bigrading(k, m) for k, m in pairs)


def _a_gram(n: int) -> list[list[int]]:
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def _a_frame(n: int) -> list[list[int]]:
    # pairings <e_j, eps_s> of e_j = eps_{j+1} - eps_j with the n+1 ambient unit vectors
    return [[(1 if s == j + 1 else 0) - (1 if s == j else 0) for s in range(n + 1)] for j in range(n)]


def _d_frame(n: int) -> list[list[int]]:
    if n == 1:
        return [[2]]
    rows = []
    for i in range(n - 1):
        rows.append([(1 if s == i else 0) - (1 if s == i + 1 else 0) for s in range(n)])
    rows.append([1 if s >= n - 2 else 0 for s in range(n)])
    return rows


def _e_gram(n: int) -> list[list[int]]:
    # Bourbaki numbering: 1-3-4-5-...-n chain, node 2 attached to node 4
    edges = [(1, 3), (2, 4)] + [(k, k + 1) for k in range(3, n)]
    gram = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        gram[a - 1][b - 1] = gram[b - 1][a - 1] = -1
    return gram


def _frame_gram(frame: list[list[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(r, s)) for s in frame] for r in frame]


def component_gram(component: Component) -> list[list[int]]:
    if component.family == "A":
        gram = _a_gram(component.rank)
    elif component.family == "D":
        gram = _frame_gram(_d_frame(component.rank))
    else:
        gram = _e_gram(component.rank)
    return [[component.rescale * x for x in row] for row in gram]


def component_frame(component: Component) -> list[list[int]] | None:
    """Pairing vectors (one column per theta factor) of the coordinate model.

    ``B B^T = G`` holds for the returned matrix ``B``. ``None`` when the
    component has no such model (E-type, rescaled).
    """
    if component.rescale != 1:
        return None
    if component.family == "A":
        return _a_frame(component.rank)
    if component.family == "D":
        return _d_frame(component.rank)
    return None


# ── exact linear algebra ─────────────────────────────────────────────────────


def _invert(matrix: Sequence[Sequence[int | Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col] != 0)
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return [row[n:] for row in work]


def _leading_minors_positive(matrix: IntMatrix) -> bool:
    n = len(matrix)
    return all(Matrix([row[:k] for row in matrix[:k]]).det() > 0 for k in range(1, n + 1))


def _ldl(form: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Completed-square decomposition ``Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2``."""
    n = len(form)
    q = [[Fraction(x) for x in row] for row in form]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                q[k][m] -= q[k][i] * q[i][m]
    return q


def enumerate_form(form: Sequence[Sequence[Fraction]], bound: Fraction) -> list[tuple[int, ...]]:
    """All integer vectors ``x`` with ``x^T form x <= bound`` (Fincke-Pohst, exact).

    Coordinate ranges come from integer square roots with one unit of outward
    slack; every candidate is then filtered with exact arithmetic.
    """
    n = len(form)
    if n == 0:
        return [()]
    if bound < 0:
        return []
    q = _ldl(form)
    found: list[tuple[int, ...]] = []
    x = [0] * n

    def descend(i: int, budget: Fraction) -> None:
        centre = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        radius = isqrt(int(budget / q[i][i])) + 1
        lo = int(centre) - radius - 1
        hi = int(centre) + radius + 1
        for value in range(lo, hi + 1):
            used = q[i][i] * (value - centre) ** 2
            if used > budget:
                continue
            x[i] = value
            if i == 0:
                found.append(tuple(x))
            else:
                descend(i - 1, budget - used)
        x[i] = 0

    descend(n - 1, Fraction(bound))
    return found


# ── vectors and classes ──────────────────────────────────────────────────────


def _fmt(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class DualVector:
    coords: RatVector

    def __neg__(self) -> "DualVector":
        return DualVector(tuple(-c for c in self.coords))

    def __str__(self) -> str:
        return "(" + ",".join(_fmt(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class CosetClass:
    representative: DualVector
    delta: Fraction
    key: RatVector = field(compare=False)

    def __str__(self) -> str:
        return f"[{self.representative}] delta={_fmt(self.delta)}"


def _class_key(coords: Iterable[Fraction], modulus: int = 1) -> RatVector:
    return tuple(c % modulus for c in coords)


# ── the lattice ──────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Lattice:
    gram: IntMatrix
    spec: RootLatticeSpec

    def __post_init__(self) -> None:
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise LatticeSpecError("Gram matrix must be square")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeSpecError("Gram matrix must be symmetric")
        if any(self.gram[i][i] % 2 for i in range(n)):
            raise LatticeSpecError("lattice must be even")
        if n and not _leading_minors_positive(self.gram):
            raise LatticeSpecError("Gram matrix must be positive definite")

    # basic data
    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return int(Matrix(self.gram).det()) if self.rank else 1

    @cached_property
    def inverse_gram(self) -> list[list[Fraction]]:
        return _invert(self.gram)

    @cached_property
    def elementary_divisors(self) -> tuple[int, ...]:
        """Invariant factors of ``L'/L`` (those different from 1)."""
        if not self.rank:
            return ()
        snf = smith_normal_form(Matrix(self.gram), domain=ZZ)
        divisors = tuple(abs(int(snf[i, i])) for i in range(self.rank))
        result = tuple(d for d in divisors if d != 1)
        if prod(result) != self.det:
            raise LatticeSpecError(f"elementary divisors {result} do not multiply to det {self.det}")
        return result

    @cached_property
    def blocks(self) -> tuple[tuple[Component, int], ...]:
        """Each component with the offset of its first basis vector."""
        out, offset = [], 0
        for component in self.spec.components:
            out.append((component, offset))
            offset += component.rank
        return tuple(out)

    @cached_property
    def components(self) -> tuple[ComponentInfo, ...]:
        return tuple(component_invariants(c) for c in self.spec.components)

    # coordinate changes
    def pairing(self, coords: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(sum((g * c for g, c in zip(row, coords)), Fraction(0)) for row in self.gram)

    def from_pairing(self, p: Sequence[int | Fraction]) -> RatVector:
        return tuple(sum((g * x for g, x in zip(row, p)), Fraction(0)) for row in self.inverse_gram)

    def norm(self, coords: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(coords, self.pairing(coords))), Fraction(0))

    def pairing_norm(self, p: Sequence[int | Fraction]) -> Fraction:
        """Norm of the dual vector whose pairing vector is ``p``."""
        return sum((x * y for x, y in zip(p, self.from_pairing(p))), Fraction(0))

    def bilinear(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum((a * b for a, b in zip(u, self.pairing(v))), Fraction(0))

    def quadratic_form_of_pairings(self, vectors: Iterable[Sequence[int | Fraction]]) -> list[list[Fraction]]:
        """The Gram-basis matrix of ``z -> sum_v <v, z>^2`` for pairing vectors ``v``."""
        n = self.rank
        acc = [[Fraction(0)] * n for _ in range(n)]
        for v in vectors:
            for i in range(n):
                if v[i]:
                    for j in range(n):
                        acc[i][j] += Fraction(v[i]) * v[j]
        return acc

    # enumeration
    def short_vectors(self, norm_bound: Fraction | int, *, in_dual: bool = False,
                      include_zero: bool = False) -> list[DualVector]:
        """Complete list of (dual) lattice vectors of norm at most ``norm_bound``."""
        bound = Fraction(norm_bound)
        if in_dual:
            points = enumerate_form(self.inverse_gram, bound)
            vectors = [DualVector(self.from_pairing(p)) for p in points]
        else:
            points = enumerate_form([[Fraction(x) for x in row] for row in self.gram], bound)
            vectors = [DualVector(tuple(Fraction(x) for x in p)) for p in points]
        if not include_zero:
            vectors = [v for v in vectors if any(v.coords)]
        return sorted(vectors, key=lambda v: (self.norm(v.coords), v.coords))

    def _dual_points_with_norms(self, bound: Fraction) -> list[tuple[Fraction, RatVector]]:
        out = []
        for p in enumerate_form(self.inverse_gram, bound):
            coords = self.from_pairing(p)
            out.append((self.pairing_norm(p), coords))
        return out

    def coset_minima(self, modulus: int = 1) -> dict[RatVector, CosetClass]:
        """Minimal norm and canonical representative of every class of ``L' / modulus*L``."""
        return dict(_coset_minima(self, modulus))

    @cached_property
    def discriminant_classes(self) -> tuple[CosetClass, ...]:
        classes = _product_classes(self)
        logger.info("%s: %d discriminant classes, delta_L = %s", self.spec, len(classes),
                    max((c.delta for c in classes), default=Fraction(0)))
        return classes

    @property
    def delta(self) -> Fraction:
        return max((c.delta for c in self.discriminant_classes), default=Fraction(0))

    def class_of(self, coords: Sequence[Fraction]) -> CosetClass:
        key = _class_key(coords)
        for cls in self.discriminant_classes:
            if cls.key == key:
                return cls
        raise LatticeSpecError(f"{tuple(map(_fmt, coords))} is not in the dual lattice")

    def frame(self) -> list[tuple[int, ...]] | None:
        """Pairing vectors of the theta factors of the lattice's own theta block."""
        columns: list[tuple[int, ...]] = []
        for component, offset in self.blocks:
            local = component_frame(component)
            if local is None:
                return None
            for s in range(len(local[0])):
                vector = [0] * self.rank
                for j in range(component.rank):
                    vector[offset + j] = local[j][s]
                columns.append(tuple(vector))
        return columns


def _single_component_classes(lattice: Lattice, modulus: int) -> dict[RatVector, CosetClass]:
    target = lattice.det * modulus ** lattice.rank
    bound = Fraction(max(1, modulus * modulus))
    while True:
        best: dict[RatVector, tuple[Fraction, RatVector]] = {}
        for norm, coords in lattice._dual_points_with_norms(bound):
            key = _class_key(coords, modulus)
            current = best.get(key)
            if current is None or (norm, coords) < current:
                best[key] = (norm, coords)
        if len(best) == target:
            return {k: CosetClass(DualVector(c), n, k) for k, (n, c) in best.items()}
        bound *= 2


def _coset_minima(lattice: Lattice, modulus: int) -> dict[RatVector, CosetClass]:
    # classes of a direct sum are products; norms add and representatives concatenate
    parts = []
    for component, _offset in lattice.blocks:
        parts.append(_component_coset_minima(component, modulus))
    if not parts:
        return {(): CosetClass(DualVector(()), Fraction(0), ())}
    out: dict[RatVector, CosetClass] = {}
    for combo in itertools.product(*(sorted(p.values(), key=lambda c: c.key) for p in parts)):
        key = tuple(itertools.chain.from_iterable(c.key for c in combo))
        rep = tuple(itertools.chain.from_iterable(c.representative.coords for c in combo))
        out[key] = CosetClass(DualVector(rep), sum((c.delta for c in combo), Fraction(0)), key)
    return out


@lru_cache(maxsize=None)
def _component_coset_minima(component: Component, modulus: int) -> dict[RatVector, CosetClass]:
    single = _build_cached(RootLatticeSpec((component,)))
    return _single_component_classes(single, modulus)


def _product_classes(lattice: Lattice) -> tuple[CosetClass, ...]:
    classes = _coset_minima(lattice, 1).values()
    return tuple(sorted(classes, key=lambda c: (c.delta, c.representative.coords)))


# ── constructors ─────────────────────────────────────────────────────────────


@lru_cache(maxsize=None)
def _build_cached(spec: RootLatticeSpec) -> Lattice:
    n = spec.rank
    gram = [[0] * n for _ in range(n)]
    offset = 0
    for component in spec.components:
        local = component_gram(component)
        for i in range(component.rank):
            for j in range(component.rank):
                gram[offset + i][offset + j] = local[i][j]
        offset += component.rank
    return Lattice(tuple(tuple(row) for row in gram), spec)


def build(spec: RootLatticeSpec | str) -> Lattice:
    """Realize a root-lattice spec as a Gram matrix in the coordinate models.

    Lattices with an ``E8`` component are refused; ``delta_value`` and
    ``component_invariants`` still reach them.
    """
    if isinstance(spec, str):
        spec = RootLatticeSpec.parse(spec)
    if any(c.family == "E" and c.rank == 8 for c in spec.components):
        raise LatticeSpecError(f"{spec}: E8 components are outside the supported lattices")
    return _build_cached(spec)


def short_vectors(lattice: Lattice, in_dual: bool, norm_bound: Fraction | int) -> list[DualVector]:
    return lattice.short_vectors(norm_bound, in_dual=in_dual)


def discriminant_classes(lattice: Lattice) -> list[CosetClass]:
    return list(lattice.discriminant_classes)


def component_invariants(component: Component) -> ComponentInfo:
    single = _build_cached(RootLatticeSpec((component,)))
    roots = len(single.short_vectors(2))
    h = roots // component.rank
    if roots != h * component.rank:
        raise LatticeSpecError(f"{component.label}: {roots} roots is not a multiple of the rank")
    return ComponentInfo(component, h, roots, table_bigradings(component))


def delta_value(label: str) -> Fraction:
    """delta_L of the lattice named by ``label``, certified by enumeration."""
    return _build_cached(RootLatticeSpec.parse(label)).delta
