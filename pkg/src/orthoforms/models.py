"""Pydantic schema – machine-readable reports and reference rows."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Annotated, Any, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator

from .qseries import format_fraction


def _to_fraction(value: Any) -> Any:
    if isinstance(value, (int, str)):
        return Fraction(value)
    return value


Rational = Annotated[
    Fraction,
    BeforeValidator(_to_fraction),
    PlainSerializer(format_fraction, return_type=str),
]


class Report(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


# ── lattices ─────────────────────────────────────────────────────────────────


class ClassRow(Report):
    representative: str
    delta: Rational


class ComponentRow(Report):
    label: str
    coxeter_number: int
    root_count: int
    bigradings: list[str] = Field(default_factory=list)


class LatticeReport(Report):
    lattice: str
    rank: int
    gram: list[list[int]]
    det: int
    elementary_divisors: list[int]
    classes: list[ClassRow]
    delta: Rational
    components: list[ComponentRow]


# ── Jacobi forms and lifts ───────────────────────────────────────────────────


class ThetaBlockReport(Report):
    lattice: str
    weight: Rational
    index: Rational
    q_order: Rational
    half_dual: bool
    classification: Optional[str] = None
    expansion: dict[str, Any]


class CoefficientMismatch(Report):
    m: int
    n: int
    zeta: str
    grit: Rational
    borch: Rational


class TheoremReport(Report):
    block: str
    ximax: int
    qmax: int
    compared: int
    mismatches: list[CoefficientMismatch] = Field(default_factory=list)
    symmetry_ok: bool

    @property
    def equal(self) -> bool:
        return not self.mismatches

    @property
    def verdict(self) -> str:
        return "equal" if self.equal else "different"


class SymmetryReport(Report):
    ok: bool
    witness: Optional[tuple[int, str, int]] = None


class DivisorRow(Report):
    n: Rational
    zeta: str
    multiplicity: Rational


class LiftReport(Report):
    kind: Literal["grit", "borch"]
    lattice: str
    weight: Rational
    xi_order: Optional[Rational] = None
    ximax: int
    qmax: int
    terms: list[dict[str, Any]]
    divisors: list[DivisorRow] = Field(default_factory=list)


# ── arrangements ─────────────────────────────────────────────────────────────


class HeegnerRow(Report):
    a: Rational
    gamma: str
    tag: str
    bucket: Optional[int] = None


class LooijengaCertificate(Report):
    lattice: str
    l: int
    verdict: Literal["pass", "fail", "inconclusive"]
    buckets: dict[int, int]
    weighted_sum: int
    clique_sum: Optional[int] = None
    gram_rank: Optional[int] = None
    bound: int
    divisors: list[HeegnerRow] = Field(default_factory=list)
    codimension_bound: int = 0

    @property
    def margin(self) -> int:
        used = next(v for v in (self.gram_rank, self.clique_sum, self.weighted_sum) if v is not None)
        return self.bound - used


# ── structure tables ─────────────────────────────────────────────────────────


class GeneratorTableRow(Report):
    l0: str
    l1: str
    family: str
    eisenstein: list[int] = Field(default_factory=lambda: [4, 6])
    abelian: list[int] = Field(default_factory=list)
    jacobi: list[int] = Field(default_factory=list)
    jacobian_weight: int


class JacobianWeights(Report):
    k_formula: int
    k_solver: int
    k_sumrule: int


class PrincipalPart(Report):
    entry: str
    k: int
    coxeter_number: int
    multiplicities: list[int] = Field(default_factory=list)
    residuals: list[Rational] = Field(default_factory=list)


class AppendixErratum(Report):
    jacobi: Optional[list[int]] = None
    jacobian: int


class AppendixRow(Report):
    l0: str
    l1: str
    abelian: list[int] = Field(default_factory=list)
    jacobi: list[int]
    jacobian: int
    predicted: bool = False
    erratum: Optional[AppendixErratum] = None

    @field_validator("abelian", "jacobi", mode="before")
    @classmethod
    def _split_weights(cls, v: Any) -> Any:  # "1, 3, 4" or "-" in the YAML
        if isinstance(v, str):
            return [] if v.strip() in ("", "-") else [int(x) for x in v.split(",")]
        if isinstance(v, int):
            return [v]
        return v


class TableCheck(Report):
    row: str
    status: Literal["agree", "erratum", "disagree"]
    printed_jacobian: int
    computed_jacobian: int
    computed_jacobi: list[int]


_TERM = re.compile(r"^([+-]?)(\d*)(t(?:\^(\d+))?)?$")


def _expand_powers(value: Any) -> Any:
    """``"4^2, 6, 8^3"`` -> ``[4, 4, 6, 8, 8, 8]``."""
    if not isinstance(value, str):
        return value
    out: list[int] = []
    for token in value.replace(" ", "").split(","):
        base, _, times = token.partition("^")
        out.extend([int(base)] * int(times or 1))
    return out


def _parse_polynomial(value: Any) -> Any:
    """``"1 + 2t^8 - t^15"`` -> ``{0: 1, 8: 2, 15: -1}``."""
    if not isinstance(value, str):
        return value
    out: dict[int, int] = {}
    for token in re.findall(r"[+-]?[^+-]+", value.replace(" ", "")):
        match = _TERM.match(token)
        if match is None:
            raise ValueError(f"cannot parse polynomial term {token!r}")
        sign, coeff, var, exp = match.groups()
        c = int(coeff) if coeff else 1
        e = (int(exp) if exp else 1) if var else 0
        out[e] = out.get(e, 0) + (-c if sign == "-" else c)
    return out


class HilbertErratum(Report):
    generators: Annotated[Optional[list[int]], BeforeValidator(_expand_powers)] = None
    numerator: Annotated[Optional[dict[int, int]], BeforeValidator(_parse_polynomial)] = None
    denominator: Annotated[Optional[list[int]], BeforeValidator(_expand_powers)] = None


class HilbertItem(Report):
    lattice: str
    generators: Annotated[list[int], BeforeValidator(_expand_powers)]
    numerator: Annotated[dict[int, int], BeforeValidator(_parse_polynomial)]
    denominator: Annotated[list[int], BeforeValidator(_expand_powers)]
    erratum: Optional[HilbertErratum] = None

    @property
    def corrected(self) -> tuple[list[int], dict[int, int], list[int]]:
        """(generators, numerator, denominator) with any recorded erratum applied."""
        fix = self.erratum or HilbertErratum()
        return (
            fix.generators if fix.generators is not None else self.generators,
            fix.numerator if fix.numerator is not None else self.numerator,
            fix.denominator if fix.denominator is not None else self.denominator,
        )


class Norm2Table(Report):
    groups: dict[str, list[str]]

    @property
    def lattices(self) -> list[str]:
        return [name for names in self.groups.values() for name in names]
