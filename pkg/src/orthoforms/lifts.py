"""Fourier-Jacobi expansions of additive lifts and Borcherds products.

Both lifts produce a :class:`FourierJacobiSeries`: the coefficient of
``xi^m`` is a Jacobi form of index ``m`` known for ``q``-powers below
``qmax``. The theta-block identity is then checked coefficient by
coefficient.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .constants import Q_SCALE, QMAX, XIMAX
from .errors import (
    InsufficientPrecision,
    NegativeXiOrder,
    NonIntegralSingularPart,
    NonIntegralXiOrder,
    OrthoformsError,
    QOrderMismatch,
)
from .jacobi import (
    JacobiExpansion,
    Key,
    Zeta,
    ThetaBlockSpec,
    divide_exact,
    hecke,
    is_positive,
    q0_invariants,
    q_count,
    theta_block,
    theta_quotient,
)
from .lattice import Lattice, build
from .models import CoefficientMismatch, SymmetryReport, TheoremReport
from .qseries import bernoulli, format_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FourierJacobiSeries:
    lattice: Lattice
    weight: Fraction
    terms: tuple[JacobiExpansion, ...]
    qmax: int

    @property
    def ximax(self) -> int:
        return len(self.terms)

    def coefficient(self, n: int, y: Zeta, m: int) -> Fraction:
        """``f(n, l, m)`` with ``l`` stored as twice its pairing vector."""
        return self.terms[m][(Q_SCALE * n, y)]

    def __mul__(self, other: "FourierJacobiSeries") -> "FourierJacobiSeries":
        if self.lattice != other.lattice:
            raise OrthoformsError("series live on different lattices")
        count = min(self.ximax, other.ximax)
        qmax = min(self.qmax, other.qmax)
        terms = []
        for m in range(count):
            acc = self.terms[0] * other.terms[m]
            for i in range(1, m + 1):
                acc = acc + self.terms[i] * other.terms[m - i]
            terms.append(acc.truncate(Q_SCALE * qmax))
        return FourierJacobiSeries(self.lattice, self.weight + other.weight, tuple(terms), qmax)

    def same_as(self, other: "FourierJacobiSeries") -> bool:
        count = min(self.ximax, other.ximax)
        return all(self.terms[m].same_as(other.terms[m]) for m in range(count))

    def to_json(self) -> list[dict[str, object]]:
        return [{"xi": m, **term.to_json()} for m, term in enumerate(self.terms)]


def _zero_term(lattice: Lattice, weight: Fraction, m: int, qmax: int) -> JacobiExpansion:
    return JacobiExpansion.zero(lattice, weight, m, Q_SCALE * qmax)


# ── additive lift ────────────────────────────────────────────────────────────


def _check_index_one(phi: JacobiExpansion, what: str) -> None:
    if phi.index != 1:
        raise OrthoformsError(f"{what} needs an index-1 input, got index {phi.index}")
    if phi.half_dual or any(n % Q_SCALE for n, _ in phi.coeffs):
        raise OrthoformsError(f"{what} needs integral q-exponents and zeta-exponents in L'")


def zeroth_term(phi: JacobiExpansion, qmax: int, zeta_terms: int | None = None) -> JacobiExpansion:
    """``phi | T_-(0)`` from the ``q^0`` coefficients of ``phi``.

    The ``q^0`` part of the result is a Laurent series in ``zeta``; only the
    terms ``d l'`` with ``d < zeta_terms`` are kept there.
    """
    k = int(phi.weight)
    zeta_terms = max(qmax, XIMAX) if zeta_terms is None else zeta_terms
    base = phi.layer(0)
    zero = (0,) * phi.lattice.rank
    out: dict[Key, Fraction] = {}

    def bump(key: Key, value: Fraction) -> None:
        out[key] = out.get(key, Fraction(0)) + value

    if k % 2 == 0 and base.get(zero):
        bump((0, zero), -base[zero] * bernoulli(k) / (2 * k))
    for y, c in base.items():
        if is_positive(y):
            for d in range(1, zeta_terms):
                bump((0, tuple(d * x for x in y)), Fraction(d) ** (k - 1) * c)
    for n in range(1, qmax):
        for d in range(1, n + 1):
            if n % d:
                continue
            for y, c in base.items():
                bump((Q_SCALE * n, tuple(d * x for x in y)), Fraction(d) ** (k - 1) * c)
    return JacobiExpansion(phi.lattice, phi.weight, Fraction(0), out, Q_SCALE * qmax)


def grit(phi: JacobiExpansion, ximax: int = XIMAX, qmax: int = QMAX,
         zeta_terms: int | None = None) -> FourierJacobiSeries:
    """Gritsenko lift: ``sum_m (phi | T_-(m)) xi^m``."""
    _check_index_one(phi, "grit")
    if phi.weight.denominator != 1 or phi.weight < 1:
        raise OrthoformsError(f"additive lift needs an integral weight k >= 1, got {phi.weight}")
    required = (ximax - 1) * (qmax - 1) + 1
    if q_count(phi.prec) < required:
        raise InsufficientPrecision("grit", required=Q_SCALE * required, available=phi.prec)
    if phi.weight == 1:
        total = [Fraction(0)] * phi.lattice.rank
        for y, c in phi.layer(0).items():
            if is_positive(y):
                total = [t + c * Fraction(x, 2) for t, x in zip(total, y)]
        if any(total):
            raise OrthoformsError("weight-1 input violates sum_{l>0} f(0,l) <l,z> = 0")
    logger.info("grit on %s: weight %s, %d xi-terms below q^%d", phi.lattice.spec, phi.weight, ximax, qmax)
    terms = [zeroth_term(phi, qmax, zeta_terms)]
    for m in range(1, ximax):
        terms.append(hecke(phi, m, Q_SCALE * qmax))
    return FourierJacobiSeries(phi.lattice, phi.weight, tuple(terms), qmax)


# ── Borcherds products ───────────────────────────────────────────────────────


def singular_integrality_bound(lattice: Lattice) -> int:
    """Integral q-count beyond which every singular class of an index-1 form has been seen."""
    return int(lattice.delta / 2) + 1


def check_singular_integrality(phi: JacobiExpansion) -> None:
    required = singular_integrality_bound(phi.lattice)
    if q_count(phi.prec) < required:
        raise InsufficientPrecision("singular-part integrality", required=Q_SCALE * required, available=phi.prec)
    others = 0
    for key, value in sorted(phi.coeffs.items()):
        if value.denominator == 1:
            continue
        if phi.hyperbolic_norm(key) <= 0:
            raise NonIntegralSingularPart(Fraction(key[0], Q_SCALE), key[1], value)
        others += 1
    if others:
        logger.warning("%d non-singular coefficients of the input are not integral", others)


def xi_order(phi: JacobiExpansion) -> int:
    c = q0_invariants(phi).c
    if c < 0:
        raise NegativeXiOrder(c)
    if c.denominator != 1:
        raise NonIntegralXiOrder(c)
    return int(c)


def _positive_part(base: dict[Zeta, Fraction], orientation: Iterable[Zeta] | None) -> list[tuple[Zeta, int]]:
    """Theta factors ``(l, multiplicity)``, one entry per direction that is used.

    ``orientation`` is a multiset: listing both ``l`` and ``-l`` splits ``f(0, l)``
    between the two directions. Otherwise the whole of ``f(0, l)`` goes to the
    listed direction, or to the lexicographically positive one.
    """
    chosen = Counter(orientation or ())
    out = []
    for y, c in sorted(base.items()):
        if not any(y) or not is_positive(y):
            continue
        neg = tuple(-x for x in y)
        up, down = chosen[y], chosen[neg]
        if up + down == c:
            out.extend((z, k) for z, k in ((y, up), (neg, down)) if k)
        else:
            out.append((neg if down and not up else y, int(c)))
    return out


def exp_terms(xs: Sequence[JacobiExpansion], lattice: Lattice, count: int, prec: int) -> list[JacobiExpansion]:
    """Coefficients ``E_M`` of ``exp(-sum_{j>=1} X_j xi^j)`` for ``M < count``."""
    terms = [JacobiExpansion.constant(lattice, 1, prec)]
    for m in range(1, count):
        acc = JacobiExpansion.zero(lattice, 0, m, prec)
        for j in range(1, m + 1):
            acc = acc + (xs[j] * terms[m - j]).scale(-j)
        terms.append(acc.scale(Fraction(1, m)))
    return terms


def borch(phi: JacobiExpansion, ximax: int = XIMAX, qmax: int = QMAX,
          orientation: Iterable[Zeta] | None = None) -> FourierJacobiSeries:
    """Borcherds product ``Theta_{f(0,*)} xi^C exp(-sum_m (phi | T_-(m)) xi^m)``.

    ``orientation`` selects which of ``+-l`` counts as positive for the theta
    factors; the default is lexicographic positivity.
    """
    if phi.weight != 0:
        raise OrthoformsError(f"Borcherds products need weight 0, got {phi.weight}")
    _check_index_one(phi, "borch")
    check_singular_integrality(phi)
    c = xi_order(phi)
    base = phi.layer(0)
    zero = (0,) * phi.lattice.rank
    f00 = base.get(zero, Fraction(0))
    weight = f00 / 2
    lattice = phi.lattice
    if c >= ximax:
        terms = tuple(_zero_term(lattice, weight, m, qmax) for m in range(ximax))
        return FourierJacobiSeries(lattice, weight, terms, qmax)

    count = ximax - c
    needed = max(1, (count - 1) * (qmax - c - 1) + 1)
    if q_count(phi.prec) < needed:
        raise InsufficientPrecision("borch", required=Q_SCALE * needed, available=phi.prec)

    positive = _positive_part(base, orientation)
    eta = int(f00) - sum(mult for _, mult in positive)
    valuation = min(phi.valuation or 0, 0)
    theta_prec = Q_SCALE * qmax - valuation * max(count - 1, 1)
    leading = theta_quotient(lattice, eta, [(tuple(x // 2 for x in y), mult) for y, mult in positive], theta_prec)
    logger.info("borch on %s: C = %d, weight %s, theta quotient known below q^%s",
                lattice.spec, c, format_fraction(weight), format_fraction(Fraction(leading.prec, Q_SCALE)))

    xs = [JacobiExpansion.constant(lattice, 0, phi.prec)] + [hecke(phi, j) for j in range(1, count)]
    es = exp_terms(xs, lattice, count, phi.prec)
    terms = [_zero_term(lattice, weight, m, qmax) for m in range(c)]
    for m, e in enumerate(es):
        term = leading * e
        if term.prec < Q_SCALE * qmax:
            raise InsufficientPrecision(f"borch xi^{c + m}", required=Q_SCALE * qmax, available=term.prec)
        terms.append(JacobiExpansion(lattice, weight, c + m, term.coeffs, Q_SCALE * qmax))
    return FourierJacobiSeries(lattice, weight, tuple(terms), qmax)


def borch_log(series: FourierJacobiSeries, c: int) -> list[JacobiExpansion]:
    """``L_M`` with ``log(F / (Theta xi^C)) = sum_M L_M xi^M``; equals ``-phi | T_-(M)``."""
    leading = series.terms[c]
    es = [divide_exact(series.terms[c + m], leading) for m in range(series.ximax - c)]
    logs: list[JacobiExpansion] = [es[0].scale(0)]
    for m in range(1, len(es)):
        acc = es[m]
        for j in range(1, m):
            acc = acc - (logs[j] * es[m - j]).scale(Fraction(j, m))
        logs.append(acc)
    return logs


# ── inputs and the theta-block identity ──────────────────────────────────────


def psi_input(m: int, qmax: int = QMAX) -> JacobiExpansion:
    """``-(theta_{D_m} | T_-(2)) / theta_{D_m}``: weak, weight 0, index 1 on ``D_m``."""
    if not 1 <= m <= 11:
        raise OrthoformsError(f"psi input is defined for 1 <= m <= 11, got {m}")
    return psi_from_block(ThetaBlockSpec.of_lattice(build(f"D{m}")), qmax)


def psi_from_block(spec: ThetaBlockSpec, qmax: int) -> JacobiExpansion:
    theta = theta_block(spec, Q_SCALE * (2 * qmax + 1))
    psi = -divide_exact(hecke(theta, 2), theta)
    psi = psi.truncate(Q_SCALE * qmax)
    if psi.prec < Q_SCALE * qmax:
        raise InsufficientPrecision("psi input", required=Q_SCALE * qmax, available=psi.prec)
    for key, value in sorted(psi.coeffs.items()):
        if value.denominator != 1:
            raise NonIntegralSingularPart(Fraction(key[0], Q_SCALE), key[1], value)
    return psi


def theta_identity_precisions(spec: ThetaBlockSpec, ximax: int, qmax: int) -> tuple[int, int]:
    """Integral q-counts for the block and for its Borcherds input."""
    cert = singular_integrality_bound(spec.lattice)
    p_psi = max(qmax - 1, cert, (ximax - 2) * (qmax - 2) + 1, 1)
    p_theta = max((ximax - 1) * (qmax - 1) + 1, 2 * p_psi + 2)
    return p_theta, p_psi


def fj_symmetry_check(series: FourierJacobiSeries) -> SymmetryReport:
    """``f(n, l, m) = f(m, l, n)`` for every ``n, m`` inside both truncations."""
    bound = min(series.ximax, series.qmax)
    for m in range(bound):
        for n in range(m + 1, bound):
            ys = set(series.terms[m].layer(Q_SCALE * n)) | set(series.terms[n].layer(Q_SCALE * m))
            for y in sorted(ys):
                if series.coefficient(n, y, m) != series.coefficient(m, y, n):
                    return SymmetryReport(ok=False, witness=(n, zeta_label(series.lattice, y), m))
    return SymmetryReport(ok=True)


def zeta_label(lattice: Lattice, y: Zeta) -> str:
    coords = lattice.from_pairing([Fraction(x, 2) for x in y])
    return "(" + ",".join(format_fraction(c) for c in coords) + ")"


def verify_theta_identity(spec: ThetaBlockSpec, ximax: int = XIMAX, qmax: int = QMAX) -> TheoremReport:
    """Compare ``grit(Theta)`` with ``borch(-(Theta | T_-(2)) / Theta)`` coefficient by coefficient."""
    index = spec.computed_index()
    if spec.q_order != 1 or index is None:
        raise QOrderMismatch(
            "theta identity needs a block of q-order one",
            weight=spec.weight, index=index if index is not None else Fraction(-1), q_order=spec.q_order,
        )
    if spec.weight <= 0:
        raise OrthoformsError(f"theta identity needs positive weight, got {spec.weight}")
    p_theta, p_psi = theta_identity_precisions(spec, ximax, qmax)
    logger.info("verify theta identity on %s: block to q^%d, input to q^%d", spec.lattice.spec, p_theta, p_psi)

    theta = theta_block(spec, Q_SCALE * p_theta)
    additive = grit(theta, ximax, qmax)
    psi = (-divide_exact(hecke(theta, 2), theta)).truncate(Q_SCALE * p_psi)
    product = borch(psi, ximax, qmax, orientation=[tuple(2 * x for x in f) for f in spec.factors])

    mismatches = []
    compared = 0
    for m in range(ximax):
        left, right = additive.terms[m], product.terms[m]
        for n in range(qmax):
            ys = set(left.layer(Q_SCALE * n)) | set(right.layer(Q_SCALE * n))
            for y in sorted(ys):
                compared += 1
                a, b = left[(Q_SCALE * n, y)], right[(Q_SCALE * n, y)]
                if a != b:
                    mismatches.append(
                        CoefficientMismatch(m=m, n=n, zeta=zeta_label(spec.lattice, y), grit=a, borch=b)
                    )
    symmetry = fj_symmetry_check(product)
    if mismatches:
        logger.warning("theta identity on %s: %d mismatching coefficients", spec.lattice.spec, len(mismatches))
    return TheoremReport(
        block=str(spec.lattice.spec), ximax=ximax, qmax=qmax, compared=compared,
        mismatches=mismatches, symmetry_ok=symmetry.ok,
    )
