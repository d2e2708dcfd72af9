"""Exact univariate q-series with exponents in (1/24)Z."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import bernoulli as _sympy_bernoulli
from sympy import divisor_sigma

from .constants import Q_SCALE, QSERIES_ORDER


def sigma(r: int, n: int) -> int:
    """Sum of the r-th powers of the positive divisors of n."""
    return int(divisor_sigma(n, r))


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Bernoulli number with the convention B_1 = -1/2."""
    if k == 1:
        return Fraction(-1, 2)
    value = _sympy_bernoulli(k)
    return Fraction(int(value.p), int(value.q))


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_exponent(scaled: int) -> str:
    """``q``-power text for a scaled exponent; empty for q^0."""
    value = Fraction(scaled, Q_SCALE)
    if value == 0:
        return ""
    if value == 1:
        return "q"
    if value.denominator == 1:
        return f"q^{value.numerator}"
    return f"q^({format_fraction(value)})"


def join_terms(terms: list[tuple[Fraction, str]]) -> str:
    """Join ``(coefficient, monomial)`` pairs into ``a*m1 - b*m2 + ...``."""
    out = ""
    for coeff, monomial in terms:
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if monomial and mag == 1:
            body = monomial
        elif monomial:
            body = f"{format_fraction(mag)}*{monomial}"
        else:
            body = format_fraction(mag)
        if not out:
            out = body if sign == "+" else f"-{body}"
        else:
            out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class QSeries:
    """Coefficients keyed by ``24 * exponent``; known for every key below ``prec``."""

    coeffs: dict[int, Fraction] = field(default_factory=dict)
    prec: int = Q_SCALE * QSERIES_ORDER

    def __post_init__(self) -> None:
        clean = {k: Fraction(v) for k, v in self.coeffs.items() if v and k < self.prec}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls({0: Fraction(1)}, prec)

    def __getitem__(self, scaled: int) -> Fraction:
        return self.coeffs.get(scaled, Fraction(0))

    @property
    def valuation(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def truncate(self, prec: int) -> "QSeries":
        return QSeries(self.coeffs, min(prec, self.prec))

    def __add__(self, other: "QSeries") -> "QSeries":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return QSeries(out, min(self.prec, other.prec))

    def __neg__(self) -> "QSeries":
        return QSeries({k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, factor: Fraction | int) -> "QSeries":
        return QSeries({k: v * factor for k, v in self.coeffs.items()}, self.prec)

    def __mul__(self, other: "QSeries") -> "QSeries":
        va = self.valuation
        vb = other.valuation
        if va is None or vb is None:
            # a zero operand still bounds where the product is known
            return QSeries({}, min(self.prec + (vb or 0), other.prec + (va or 0)))
        prec = min(self.prec + vb, other.prec + va)
        out: dict[int, Fraction] = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                k = ka + kb
                if k < prec:
                    out[k] = out.get(k, Fraction(0)) + ca * cb
        return QSeries(out, prec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        return self.truncate(prec).coeffs == other.truncate(prec).coeffs

    def __str__(self) -> str:
        terms = [(self.coeffs[k], format_exponent(k)) for k in sorted(self.coeffs)]
        body = join_terms(terms)
        tail = f"O({format_exponent(self.prec) or '1'})"
        return f"{body} + {tail}" if body else tail


def _product_coefficients(e: int, count: int) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^n)^e up to q^(count-1)."""
    a = [0] * max(count, 0)
    if count <= 0:
        return a
    a[0] = 1
    for n in range(1, count):
        total = sum(sigma(1, k) * a[n - k] for k in range(1, n + 1))
        a[n] = (-e * total) // n
    return a


def eta_power(e: int, prec: int | None = None) -> QSeries:
    """``eta(tau)^e`` truncated below scaled exponent ``prec``."""
    prec = Q_SCALE * QSERIES_ORDER if prec is None else prec
    count = 0
    while e + Q_SCALE * count < prec:
        count += 1
    coeffs = _product_coefficients(e, count)
    return QSeries({e + Q_SCALE * n: Fraction(c) for n, c in enumerate(coeffs)}, prec)


def eisenstein(k: int, prec: int | None = None) -> QSeries:
    """Normalized Eisenstein series ``E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n``."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein series need an even weight >= 2, got {k}")
    prec = Q_SCALE * QSERIES_ORDER if prec is None else prec
    factor = -Fraction(2 * k) / bernoulli(k)
    coeffs = {0: Fraction(1)}
    n = 1
    while Q_SCALE * n < prec:
        coeffs[Q_SCALE * n] = factor * sigma(k - 1, n)
        n += 1
    return QSeries(coeffs, prec)
