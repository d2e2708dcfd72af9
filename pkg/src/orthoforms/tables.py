"""Generator-weight tables, Jacobian weights, principal parts and the Norm_2 classification."""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import pandas as pd
from pydantic import BaseModel

from .errors import Disagreement, OrthoformsError
from .families import FamilyEntry, entry
from .hilbert import expand_rational, hilbert_series, minimal_generators
from .lattice import Component, RootLatticeSpec, build, component_invariants, table_bigradings
from .models import (
    AppendixRow,
    GeneratorTableRow,
    HilbertItem,
    JacobianWeights,
    PrincipalPart,
    TableCheck,
)
from .table_data import appendix_rows

logger = logging.getLogger(__name__)

EISENSTEIN = (4, 6)

# appendix layout: CSV header -> attribute path on GeneratorTableRow
APPENDIX_COLUMNS = {
    "L0": "l0",
    "L1": "l1",
    "Eisenstein": "eisenstein",
    "abelian": "abelian",
    "Jacobi": "jacobi",
    "J": "jacobian_weight",
}


def _as_entry(value: FamilyEntry | str) -> FamilyEntry:
    return entry(value) if isinstance(value, str) else value


def _coxeter(component: Component) -> int:
    return component_invariants(component).coxeter_number


# ── generator weights ────────────────────────────────────────────────────────


def abelian_weights(rank: int) -> list[int]:
    """``{m+1} ∪ {m+1-i : 2 <= i <= m}`` for one ``A_m`` summand of ``L0``."""
    return sorted([rank + 1] + [rank + 1 - i for i in range(2, rank + 1)])


def generator_weights(value: FamilyEntry | str) -> GeneratorTableRow:
    e = _as_entry(value)
    shift = 12 - sum(m + 1 for m in e.a_ranks)
    abelian = sorted(w for m in e.a_ranks for w in abelian_weights(m))
    jacobi = sorted(g.weight + g.index * shift for g in table_bigradings(e.l1))
    if any(w <= 0 for w in jacobi):
        raise OrthoformsError(f"{e.label}: Jacobi-type weights {jacobi} are not all positive")
    return GeneratorTableRow(
        l0=str(e.l0),
        l1=e.l1.label,
        family=e.family,
        eisenstein=list(EISENSTEIN),
        abelian=abelian,
        jacobi=jacobi,
        jacobian_weight=sum_rule([*EISENSTEIN, *abelian, *jacobi], e.lattice.rank + 2),
    )


def sum_rule(weights: Iterable[int], l: int) -> int:
    """Weight of the Jacobian of a free algebra on ``l + 1`` generators: ``l + sum(weights)``."""
    return l + sum(weights)


# ── Jacobian weight ──────────────────────────────────────────────────────────


def closed_jacobian_weight(value: FamilyEntry | str) -> int:
    """``12(h+1) - rk(L1) h / 2 - sum_j (h - 1 - m_j/2)(m_j + 1)``."""
    e = _as_entry(value)
    h = _coxeter(e.l1)
    k = 12 * (h + 1) - Fraction(e.l1.rank * h, 2)
    k -= sum((h - 1 - Fraction(m, 2)) * (m + 1) for m in e.a_ranks)
    if k.denominator != 1:
        raise OrthoformsError(f"{e.label}: closed-form Jacobian weight {k} is not an integer")
    return int(k)


def _expected_multiplicity(rank: int, h: int) -> int:
    return 2 * (h - 2) if rank == 1 else h - (rank + 1)


def _balance(component: Component, h: int) -> tuple[Fraction, Fraction, int]:
    """Coefficient on the minimal classes of ``A_m`` balancing the quadratic-form identity.

    Returns ``(coefficient, residual, number of minimal vectors)``; the residual
    is the largest entry of ``2h G - Q_roots - c Q_min``.
    """
    single = build(RootLatticeSpec((component,)))
    m = component.rank
    roots = [single.pairing(v.coords) for v in single.short_vectors(2)]
    minimal = [single.pairing(v.coords) for v in single.short_vectors(Fraction(m, m + 1), in_dual=True)]
    q_roots = single.quadratic_form_of_pairings(roots)
    q_min = single.quadratic_form_of_pairings(minimal)
    coefficient = (2 * h * single.gram[0][0] - q_roots[0][0]) / q_min[0][0]
    residual = max(
        abs(2 * h * single.gram[i][j] - q_roots[i][j] - coefficient * q_min[i][j])
        for i in range(m) for j in range(m)
    )
    return coefficient, residual, len(minimal)


def principal_part(value: FamilyEntry | str) -> PrincipalPart:
    """Weight and pole multiplicities of the Jacobian from the ``q^0`` identities of its input form."""
    e = _as_entry(value)
    h = _coxeter(e.l1)
    lattice = e.lattice
    multiplicities: list[int] = []
    residuals: list[Fraction] = []
    orbit_total = Fraction(0)
    for component in e.l0.components:
        coefficient, residual, size = _balance(component, h)
        expected = _expected_multiplicity(component.rank, h)
        if coefficient != expected:
            raise Disagreement(f"{e.label}: multiplicity on {component.label}",
                               {"solver": coefficient, "formula": expected})
        multiplicities.append(int(coefficient))
        residuals.append(residual)
        orbit_total += coefficient * size
    l1_lattice = build(RootLatticeSpec((e.l1,)))
    q_roots = l1_lattice.quadratic_form_of_pairings(
        l1_lattice.pairing(v.coords) for v in l1_lattice.short_vectors(2)
    )
    residuals.append(max(abs(2 * h * g - q) for grow, qrow in zip(l1_lattice.gram, q_roots)
                         for g, q in zip(grow, qrow)))
    root_count = len(lattice.short_vectors(2))
    k = (24 * (h + 1) - root_count - orbit_total) / 2
    if k.denominator != 1:
        raise OrthoformsError(f"{e.label}: solved weight {k} is not an integer")
    if any(residuals):
        logger.warning("%s: nonzero balance residuals %s", e.label, residuals)
    return PrincipalPart(entry=e.label, k=int(k), coxeter_number=h,
                         multiplicities=multiplicities, residuals=residuals)


def jacobian_weight(value: FamilyEntry | str) -> JacobianWeights:
    """The Jacobian weight by the closed formula, the linear solver and the sum rule."""
    e = _as_entry(value)
    weights = JacobianWeights(
        k_formula=closed_jacobian_weight(e),
        k_solver=principal_part(e).k,
        k_sumrule=generator_weights(e).jacobian_weight,
    )
    if len({weights.k_formula, weights.k_solver, weights.k_sumrule}) != 1:
        raise Disagreement(f"{e.label}: Jacobian weights", weights.model_dump())
    return weights


# ── Norm_2 classification ────────────────────────────────────────────────────


def _irreducible_candidates() -> list[tuple[Component, Fraction]]:
    pool = [Component("A", n) for n in range(1, 9)] + [Component("D", n) for n in range(4, 10)]
    pool += [Component("E", 6), Component("E", 7)]
    out = []
    for component in pool:
        delta = build(RootLatticeSpec((component,))).delta
        if delta <= 2:
            out.append((component, delta))
    return out


def norm2_classification() -> list[RootLatticeSpec]:
    """Root lattices without ``E8`` components whose ``delta_L`` is at most 2."""
    candidates = _irreducible_candidates()
    found: list[RootLatticeSpec] = []

    def extend(start: int, chosen: tuple[Component, ...], budget: Fraction) -> None:
        if chosen:
            found.append(RootLatticeSpec(chosen))
        for i in range(start, len(candidates)):
            component, delta = candidates[i]
            if delta <= budget:
                extend(i, chosen + (component,), budget - delta)

    extend(0, (), Fraction(2))
    for spec in found:
        if build(spec).delta > 2:
            raise OrthoformsError(f"{spec}: delta is not additive over components")
    return sorted(found, key=lambda s: (len(s.components), s.components))


# ── reference comparisons ────────────────────────────────────────────────────


def _row_label(row: AppendixRow) -> str:
    return f"{row.l0}:{row.l1}"


def check_row(row: AppendixRow) -> TableCheck:
    computed = generator_weights(_row_label(row))
    printed = (row.abelian, row.jacobi, row.jacobian)
    got = (computed.abelian, computed.jacobi, computed.jacobian_weight)
    status = "agree"
    if got != printed:
        status = "disagree"
        if row.erratum is not None:
            fixed = (row.abelian, row.erratum.jacobi or row.jacobi, row.erratum.jacobian)
            if got == fixed:
                status = "erratum"
                logger.warning("%s: printed row differs; recorded erratum matches", _row_label(row))
    return TableCheck(
        row=_row_label(row),
        status=status,
        printed_jacobian=row.jacobian,
        computed_jacobian=computed.jacobian_weight,
        computed_jacobi=computed.jacobi,
    )


def check_tables(rows: Sequence[AppendixRow] | None = None) -> list[TableCheck]:
    return [check_row(row) for row in (rows if rows is not None else appendix_rows())]


def check_hilbert_item(item: HilbertItem, order: int) -> tuple[bool, bool]:
    """(series agrees to ``order``, generator multiset agrees), against the erratum where one is recorded."""
    generators, numerator, denominator = item.corrected
    series = hilbert_series(item.lattice, order)
    computed = minimal_generators(item.lattice)
    series_ok = series == expand_rational(numerator, denominator, order)
    generators_ok = computed == sorted(generators)
    if item.erratum is not None and series_ok and generators_ok:
        printed_ok = (
            series == expand_rational(item.numerator, item.denominator, order)
            and computed == sorted(item.generators)
        )
        if not printed_ok:
            logger.warning("%s: printed Hilbert data differs; recorded erratum matches", item.lattice)
    return series_ok, generators_ok


# ── tabular export ───────────────────────────────────────────────────────────


def _value_at(obj: Any, path: str) -> Any:
    value = obj
    for part in path.split("."):
        if value is None:
            return None
        value = value.get(part) if isinstance(value, dict) else getattr(value, part, None)
    return value


def _cell(value: Any) -> Any:
    if isinstance(value, list):
        return ", ".join(map(str, value)) if value else "-"
    return value


def rows_to_frame(rows: Sequence[BaseModel], columns: Mapping[str, str] = APPENDIX_COLUMNS) -> pd.DataFrame:
    """One DataFrame row per report, columns ordered as in ``columns``."""
    if not rows:
        return pd.DataFrame(columns=list(columns))
    df = pd.DataFrame([{header: _cell(_value_at(r, path)) for header, path in columns.items()} for r in rows])
    return df[list(columns)]
