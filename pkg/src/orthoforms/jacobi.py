"""Truncated Fourier expansions of Jacobi forms of lattice index.

A coefficient ``f(n, l) q^n zeta^l`` is stored under the key ``(24 n, y)``
where ``y = 2 <l, b_i>`` is twice the pairing vector of ``l`` with the lattice
basis. Raw theta factors have exponents in ``(1/2) L'``, which is why ``y``
carries the factor 2; an expansion whose ``y`` are all even lives in ``L'``.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from sympy import Poly, Symbol, ZZ, cyclotomic_poly

from .constants import Q_SCALE, QSERIES_ORDER
from .errors import InsufficientPrecision, NonExactDivision, OrthoformsError, QOrderMismatch
from .lattice import Lattice, build
from .qseries import eta_power, format_exponent, format_fraction, join_terms, sigma

logger = logging.getLogger(__name__)

Zeta = tuple[int, ...]
Key = tuple[int, Zeta]
Laurent = dict[Zeta, Fraction]


def _add(a: Zeta, b: Zeta) -> Zeta:
    return tuple(x + y for x, y in zip(a, b))


def _scale_vec(a: Zeta, k: int) -> Zeta:
    return tuple(k * x for x in a)


def is_positive(y: Zeta) -> bool:
    """Lexicographic positivity: the first nonzero coordinate is positive."""
    for x in y:
        if x:
            return x > 0
    return False


def q_count(prec: int) -> int:
    """Number of integral q-powers ``n`` (from 0 upward) known below scaled ``prec``."""
    return -((-prec) // Q_SCALE)


# ── expansions ───────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class JacobiExpansion:
    lattice: Lattice
    weight: Fraction
    index: Fraction | None
    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)
    prec: int = Q_SCALE * QSERIES_ORDER

    def __post_init__(self) -> None:
        clean = {k: Fraction(v) for k, v in self.coeffs.items() if v and k[0] < self.prec}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.index is not None:
            object.__setattr__(self, "index", Fraction(self.index))

    # constructors
    @classmethod
    def constant(cls, lattice: Lattice, value: Fraction | int, prec: int) -> "JacobiExpansion":
        return cls(lattice, Fraction(0), Fraction(0), {(0, (0,) * lattice.rank): Fraction(value)}, prec)

    @classmethod
    def zero(cls, lattice: Lattice, weight: Fraction | int, index: Fraction | int, prec: int) -> "JacobiExpansion":
        return cls(lattice, Fraction(weight), Fraction(index), {}, prec)

    # inspection
    @property
    def half_dual(self) -> bool:
        return any(x % 2 for _, y in self.coeffs for x in y)

    @property
    def valuation(self) -> int | None:
        return min((n for n, _ in self.coeffs), default=None)

    def __getitem__(self, key: Key) -> Fraction:
        return self.coeffs.get(key, Fraction(0))

    def layer(self, n: int) -> Laurent:
        return {y: c for (m, y), c in self.coeffs.items() if m == n}

    def layers(self) -> dict[int, Laurent]:
        out: dict[int, Laurent] = defaultdict(dict)
        for (n, y), c in self.coeffs.items():
            out[n][y] = c
        return dict(sorted(out.items()))

    def zeta_norm(self, y: Zeta) -> Fraction:
        """``<l, l>`` for the exponent stored as ``y``."""
        return self.lattice.pairing_norm(y) / 4

    def hyperbolic_norm(self, key: Key) -> Fraction:
        """``2 n t - <l, l>``; negative exactly for singular coefficients."""
        n, y = key
        return 2 * Fraction(n, Q_SCALE) * (self.index or 0) - self.zeta_norm(y)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    # arithmetic
    def truncate(self, prec: int) -> "JacobiExpansion":
        return JacobiExpansion(self.lattice, self.weight, self.index, self.coeffs, min(prec, self.prec))

    def _check_compatible(self, other: "JacobiExpansion") -> None:
        if self.lattice != other.lattice:
            raise OrthoformsError("expansions live on different lattices")

    def __add__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        self._check_compatible(other)
        if (self.weight, self.index) != (other.weight, other.index):
            raise OrthoformsError(
                f"cannot add weight {self.weight} index {self.index} to weight {other.weight} index {other.index}"
            )
        out: dict[Key, Fraction] = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return JacobiExpansion(self.lattice, self.weight, self.index, out, min(self.prec, other.prec))

    def __neg__(self) -> "JacobiExpansion":
        return self.scale(-1)

    def __sub__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        return self + (-other)

    def scale(self, factor: Fraction | int) -> "JacobiExpansion":
        return JacobiExpansion(
            self.lattice, self.weight, self.index, {k: v * factor for k, v in self.coeffs.items()}, self.prec
        )

    def __mul__(self, other: "JacobiExpansion") -> "JacobiExpansion":
        self._check_compatible(other)
        index = None if self.index is None or other.index is None else self.index + other.index
        weight = self.weight + other.weight
        va, vb = self.valuation, other.valuation
        if va is None or vb is None:
            prec = min(self.prec + (vb or 0), other.prec + (va or 0))
            return JacobiExpansion(self.lattice, weight, index, {}, prec)
        prec = min(self.prec + vb, other.prec + va)
        out: dict[Key, Fraction] = defaultdict(Fraction)
        right = other.layers()
        for na, layer_a in self.layers().items():
            for nb, layer_b in right.items():
                n = na + nb
                if n >= prec:
                    break
                for ya, ca in layer_a.items():
                    for yb, cb in layer_b.items():
                        out[(n, _add(ya, yb))] += ca * cb
        return JacobiExpansion(self.lattice, weight, index, out, prec)

    def same_as(self, other: "JacobiExpansion") -> bool:
        """Coefficient equality on the common truncation."""
        prec = min(self.prec, other.prec)
        return self.truncate(prec).coeffs == other.truncate(prec).coeffs

    # export
    def to_text(self) -> str:
        zero = (0,) * self.lattice.rank
        out = ""
        for n, layer in self.layers().items():
            q = format_exponent(n)
            if set(layer) == {zero}:
                body = join_terms([(layer[zero], q)])
            else:
                inner = join_terms([(layer[y], self._zeta_text(y)) for y in sorted(layer)])
                body = f"({inner})" + (f"*{q}" if q else "")
            if not out:
                out = body
            elif body.startswith("-"):
                out += f" - {body[1:]}"
            else:
                out += f" + {body}"
        tail = f"O({format_exponent(self.prec) or '1'})"
        return f"{out} + {tail}" if out else tail

    def _zeta_text(self, y: Zeta) -> str:
        if not any(y):
            return ""
        coords = self.lattice.from_pairing([Fraction(x, 2) for x in y])
        return "z[(" + ",".join(format_fraction(c) for c in coords) + ")]"

    def to_json(self) -> dict[str, object]:
        terms = []
        for n, y in sorted(self.coeffs):
            coords = self.lattice.from_pairing([Fraction(x, 2) for x in y])
            terms.append({
                "q": format_fraction(Fraction(n, Q_SCALE)),
                "zeta": "(" + ",".join(format_fraction(c) for c in coords) + ")",
                "c": format_fraction(self.coeffs[(n, y)]),
            })
        return {
            "lattice": str(self.lattice.spec),
            "weight": format_fraction(self.weight),
            "index": None if self.index is None else format_fraction(self.index),
            "prec": format_fraction(Fraction(self.prec, Q_SCALE)),
            "terms": terms,
        }

    def __str__(self) -> str:
        return self.to_text()


# ── building blocks ──────────────────────────────────────────────────────────


def eta_expansion(lattice: Lattice, e: int, prec: int) -> JacobiExpansion:
    zero = (0,) * lattice.rank
    series = eta_power(e, prec)
    return JacobiExpansion(lattice, Fraction(e, 2), Fraction(0), {(k, zero): c for k, c in series.coeffs.items()}, prec)


def theta_factor(lattice: Lattice, pairing: Sequence[int], prec: int) -> JacobiExpansion:
    """``theta(tau, <s, z>)`` by its alternating sum over odd ``r``."""
    coeffs: dict[Key, Fraction] = {}
    r = 1
    while 3 * r * r < prec:
        for signed in (r, -r):
            sign = 1 if ((signed - 1) // 2) % 2 == 0 else -1
            coeffs[(3 * r * r, _scale_vec(tuple(pairing), signed))] = Fraction(sign)
        r += 2
    return JacobiExpansion(lattice, Fraction(1, 2), None, coeffs, prec)


def theta_factor_product(lattice: Lattice, pairing: Sequence[int], prec: int) -> JacobiExpansion:
    """The same factor from ``q^(1/8) (zeta^(1/2) - zeta^(-1/2)) prod (1-q^n zeta)(1-q^n/zeta)(1-q^n)``."""
    p = tuple(pairing)
    zero = (0,) * lattice.rank
    series = JacobiExpansion(lattice, Fraction(1, 2), None, {(3, p): Fraction(1), (3, _scale_vec(p, -1)): Fraction(-1)}, prec)
    n = 1
    while 3 + Q_SCALE * n < prec:
        for y in (_scale_vec(p, 2), _scale_vec(p, -2), zero):
            factor = JacobiExpansion(
                lattice, Fraction(0), Fraction(0), {(0, zero): Fraction(1), (Q_SCALE * n, y): Fraction(-1)}, prec
            )
            series = series * factor
        n += 1
    return series


@dataclass(frozen=True)
class ThetaBlockSpec:
    """``eta^e prod_j theta(tau, <s_j, z>)`` with ``s_j`` given by pairing vectors."""

    lattice: Lattice
    factors: tuple[tuple[int, ...], ...]
    eta_exponent: int
    expected_index: Fraction | None = None

    @classmethod
    def classical(cls, f: Mapping[int, int]) -> "ThetaBlockSpec":
        """``eta^{f(0)} prod_{a>0} (theta_a / eta)^{f(a)}`` on ``A1``."""
        lattice = build("A1")
        factors = tuple((a,) for a, mult in sorted(f.items()) if a > 0 for _ in range(mult))
        eta = f.get(0, 0) - sum(mult for a, mult in f.items() if a > 0)
        return cls(lattice, factors, eta)

    @classmethod
    def of_lattice(cls, lattice: Lattice | str) -> "ThetaBlockSpec":
        """The lattice's own theta block ``eta^{24-3d} prod theta(<u_s, z>)``."""
        lattice = build(lattice) if isinstance(lattice, str) else lattice
        frame = lattice.frame()
        if frame is None:
            raise OrthoformsError(f"{lattice.spec} has no coordinate frame for a theta block")
        return cls(lattice, tuple(frame), 24 - 3 * len(frame), Fraction(1))

    @property
    def weight(self) -> Fraction:
        return Fraction(self.eta_exponent + len(self.factors), 2)

    @property
    def q_order(self) -> Fraction:
        return Fraction(self.eta_exponent + 3 * len(self.factors), 24)

    def computed_index(self) -> Fraction | None:
        """``t`` with ``sum <s_j, z>^2 = t <z, z>``, or ``None`` if no such ``t`` exists."""
        return _index_of(self.lattice, self.lattice.quadratic_form_of_pairings(self.factors))


def _index_of(lattice: Lattice, form: Sequence[Sequence[Fraction]]) -> Fraction | None:
    """``t`` with ``form = t * G``, or ``None``."""
    if not lattice.rank:
        return Fraction(0)
    t = Fraction(form[0][0]) / lattice.gram[0][0]
    ok = all(form[i][j] == t * lattice.gram[i][j] for i in range(lattice.rank) for j in range(lattice.rank))
    return t if ok else None


def theta_block(spec: ThetaBlockSpec, prec: int) -> JacobiExpansion:
    index = spec.computed_index()
    if index is None or (spec.expected_index is not None and index != spec.expected_index):
        raise QOrderMismatch(
            "theta factors do not define a Jacobi form of the requested index",
            weight=spec.weight, index=index if index is not None else Fraction(-1), q_order=spec.q_order,
        )
    logger.debug("theta block on %s: weight %s index %s q-order %s", spec.lattice.spec, spec.weight, index, spec.q_order)
    product = _product_to_precision(
        spec.lattice, [(spec.eta_exponent, None)] + [(1, f) for f in spec.factors], prec
    )
    return JacobiExpansion(spec.lattice, spec.weight, index, product.coeffs, product.prec)


def _product_to_precision(lattice: Lattice, parts: list[tuple[int, tuple[int, ...] | None]], prec: int) -> JacobiExpansion:
    # each factor is truncated so that the full product is known below prec
    valuations = [e if f is None else 3 * e for e, f in parts]
    total = sum(valuations)
    result: JacobiExpansion | None = None
    for (e, f), v in zip(parts, valuations):
        own = prec - total + v
        if f is None:
            factor = eta_expansion(lattice, e, own)
        else:
            factor = theta_factor(lattice, f, own)
            for _ in range(e - 1):
                factor = factor * theta_factor(lattice, f, own)
        result = factor if result is None else result * factor
    if result is None:
        return JacobiExpansion.constant(lattice, 1, prec)
    return result.truncate(prec)


def theta_quotient(lattice: Lattice, eta_exponent: int, factors: Sequence[tuple[Sequence[int], int]],
                   prec: int) -> JacobiExpansion:
    """``eta^{e} prod theta(<l, z>)^{m_l}`` where negative ``m_l`` divide exactly."""
    top = [(1, tuple(p)) for p, m in factors if m > 0 for _ in range(m)]
    bottom = [(1, tuple(p)) for p, m in factors if m < 0 for _ in range(-m)]
    eta_top = max(eta_exponent, 0)
    eta_bottom = max(-eta_exponent, 0)
    v_top = eta_top + 3 * len(top)
    v_bottom = eta_bottom + 3 * len(bottom)
    weight = Fraction(eta_exponent + sum(m for _, m in factors), 2)
    numerator = _product_to_precision(lattice, [(eta_top, None)] + top, prec + v_bottom)
    if not bottom and not eta_bottom:
        quotient = numerator
    else:
        denominator = _product_to_precision(lattice, [(eta_bottom, None)] + bottom, prec + 2 * v_bottom - v_top)
        quotient = divide_exact(numerator, denominator)
    signed = [[Fraction(0)] * lattice.rank for _ in range(lattice.rank)]
    for p, m in factors:
        for i in range(lattice.rank):
            for j in range(lattice.rank):
                signed[i][j] += m * p[i] * p[j]
    index = _index_of(lattice, signed)
    return JacobiExpansion(lattice, weight, index, quotient.coeffs, min(quotient.prec, prec))


# ── exact division ───────────────────────────────────────────────────────────


def _lead(poly: Laurent) -> Zeta:
    return max(poly)


def laurent_divide(num: Laurent, den: Laurent, order: int) -> Laurent:
    """Exact quotient of multivariate Laurent polynomials; raises on a remainder.

    Quotient exponents are confined to the box
    ``[mindeg(num) - mindeg(den), maxdeg(num) - maxdeg(den)]`` per coordinate,
    which bounds the lexicographic long division.
    """
    if not den:
        raise NonExactDivision(order, "division by zero")
    if not num:
        return {}
    dims = len(next(iter(den)))
    lo = [min(y[i] for y in num) - min(y[i] for y in den) for i in range(dims)]
    hi = [max(y[i] for y in num) - max(y[i] for y in den) for i in range(dims)]
    rest = dict(num)
    quotient: Laurent = {}
    dlead = _lead(den)
    dcoef = den[dlead]
    while rest:
        top = _lead(rest)
        shift = tuple(a - b for a, b in zip(top, dlead))
        if any(s < a or s > b for s, a, b in zip(shift, lo, hi)):
            raise NonExactDivision(order, {k: str(v) for k, v in sorted(rest.items())[:4]})
        c = rest[top] / dcoef
        quotient[shift] = quotient.get(shift, Fraction(0)) + c
        for y, d in den.items():
            k = _add(shift, y)
            value = rest.get(k, Fraction(0)) - c * d
            if value:
                rest[k] = value
            else:
                rest.pop(k, None)
    return quotient


def divide_exact(a: JacobiExpansion, b: JacobiExpansion) -> JacobiExpansion:
    """Quotient ``a / b`` solved q-order by q-order; every remainder must vanish."""
    a._check_compatible(b)
    vb = b.valuation
    if vb is None:
        raise NonExactDivision(0, "divisor is zero")
    va = a.valuation
    weight = a.weight - b.weight
    index = None if a.index is None or b.index is None else a.index - b.index
    if va is None:
        return JacobiExpansion(a.lattice, weight, index, {}, min(a.prec - vb, b.prec))
    vq = va - vb
    prec = min(a.prec - vb, b.prec - vb + vq)
    if any((n - va) % Q_SCALE for n, _ in a.coeffs) or any((n - vb) % Q_SCALE for n, _ in b.coeffs):
        raise NonExactDivision(va, "exponents do not lie in a single class modulo 1")
    a_layers = a.layers()
    b_layers = b.layers()
    b0 = b_layers[vb]
    q_layers: dict[int, Laurent] = {}
    j = 0
    while vq + Q_SCALE * j < prec:
        target: Laurent = dict(a_layers.get(va + Q_SCALE * j, {}))
        for i in range(1, j + 1):
            bi = b_layers.get(vb + Q_SCALE * i)
            qi = q_layers.get(vq + Q_SCALE * (j - i))
            if not bi or not qi:
                continue
            for yb, cb in bi.items():
                for yq, cq in qi.items():
                    k = _add(yb, yq)
                    value = target.get(k, Fraction(0)) - cb * cq
                    if value:
                        target[k] = value
                    else:
                        target.pop(k, None)
        q_layers[vq + Q_SCALE * j] = laurent_divide(target, b0, va + Q_SCALE * j)
        j += 1
    coeffs = {(n, y): c for n, layer in q_layers.items() for y, c in layer.items()}
    return JacobiExpansion(a.lattice, weight, index, coeffs, prec)


# ── Hecke operators ──────────────────────────────────────────────────────────


def _require_integral(phi: JacobiExpansion, what: str) -> int:
    if phi.half_dual:
        raise OrthoformsError(f"{what}: zeta-exponents must lie in L'")
    if any(n % Q_SCALE for n, _ in phi.coeffs):
        raise OrthoformsError(f"{what}: q-exponents must be integral")
    if phi.weight.denominator != 1:
        raise OrthoformsError(f"{what}: weight {phi.weight} is not integral")
    if phi.index is None:
        raise OrthoformsError(f"{what}: input is not a Jacobi form of a definite index")
    return int(phi.weight)


def hecke(phi: JacobiExpansion, m: int, prec: int | None = None) -> JacobiExpansion:
    """``phi | T_-(m)``: ``f_m(n, l) = sum_{a | (n, l, m)} a^{k-1} f(n m / a^2, l / a)``.

    The image is known below ``q^{ceil(N / m)}`` for an input known below ``q^N``.
    Asking for more through ``prec`` raises :class:`InsufficientPrecision`.
    """
    if m < 1:
        raise OrthoformsError(f"Hecke index must be positive, got {m}")
    k = _require_integral(phi, "hecke")
    out_terms = -((-q_count(phi.prec)) // m)
    if prec is not None:
        wanted = q_count(prec)
        if wanted > out_terms:
            raise InsufficientPrecision(
                f"hecke T_-({m})", required=Q_SCALE * (m * (wanted - 1) + 1), available=phi.prec
            )
        out_terms = wanted
    else:
        prec = Q_SCALE * out_terms
    assert phi.index is not None
    out: dict[Key, Fraction] = defaultdict(Fraction)
    for a in range(1, m + 1):
        if m % a:
            continue
        weight_factor = Fraction(a) ** (k - 1)
        for (scaled, y), c in phi.coeffs.items():
            n_in = scaled // Q_SCALE
            if (n_in * a * a) % m:
                continue
            n = n_in * a * a // m
            if n % a or n >= out_terms:
                continue
            out[(Q_SCALE * n, _scale_vec(y, a))] += weight_factor * c
    return JacobiExpansion(phi.lattice, phi.weight, phi.index * m, out, prec)


@lru_cache(maxsize=None)
def _root_powers(m: int) -> tuple[tuple[int, ...], ...]:
    """``x^e mod Phi_m(x)`` for ``0 <= e < m``, coefficients from the constant term up."""
    x = Symbol("x")
    modulus = Poly(cyclotomic_poly(m, x), x, domain=ZZ)
    width = modulus.degree()
    out = []
    for e in range(m):
        coeffs = [int(c) for c in reversed(Poly(x**e, x, domain=ZZ).rem(modulus).all_coeffs())]
        out.append(tuple(coeffs + [0] * (width - len(coeffs))))
    return tuple(out)


def hecke_double_coset(phi: JacobiExpansion, m: int) -> JacobiExpansion:
    """``m^{k-1} sum_{a d = m} sum_{b mod d} d^{-k} phi((a tau + b) / d, a z)``, term by term.

    Each ``e(N b / d)`` is an element of ``Q(zeta_m)`` and each ``q``-exponent
    ``N a / d`` a fraction; the image must come out rational with integral
    ``q``-exponents, otherwise :class:`OrthoformsError` is raised.
    """
    if m < 1:
        raise OrthoformsError(f"Hecke index must be positive, got {m}")
    k = _require_integral(phi, "hecke")
    assert phi.index is not None
    out_terms = -((-q_count(phi.prec)) // m)
    powers = _root_powers(m)
    width = len(powers[0])
    sums: dict[tuple[Fraction, Zeta], list[Fraction]] = {}
    for a in range(1, m + 1):
        if m % a:
            continue
        d = m // a
        factor = Fraction(m) ** (k - 1) * Fraction(d) ** (-k)
        for (scaled, y), c in phi.coeffs.items():
            big_n = scaled // Q_SCALE
            exponent = Fraction(big_n * a, d)
            if exponent >= out_terms:
                continue
            slot = sums.setdefault((exponent, _scale_vec(y, a)), [Fraction(0)] * width)
            for b in range(d):
                # e(N b / d) = zeta_m^(N b a)
                for i, r in enumerate(powers[(big_n * b * a) % m]):
                    if r:
                        slot[i] += factor * c * r
    out: dict[Key, Fraction] = {}
    for (exponent, y), value in sums.items():
        if any(value[1:]):
            raise OrthoformsError(f"T_-({m}) coset sum left an irrational coefficient at q^{exponent}")
        if not value[0]:
            continue
        if exponent.denominator != 1:
            raise OrthoformsError(f"T_-({m}) coset sum left the fractional power q^{exponent}")
        out[(Q_SCALE * int(exponent), y)] = value[0]
    return JacobiExpansion(phi.lattice, phi.weight, phi.index * m, out, Q_SCALE * out_terms)


# ── weight-0 identities and classification ───────────────────────────────────


@dataclass(frozen=True)
class Q0Invariants:
    c: Fraction
    c_from_norms: Fraction
    vector_system_ok: bool
    residual: tuple[tuple[Fraction, ...], ...]


def q0_invariants(phi: JacobiExpansion) -> Q0Invariants:
    """The constant ``C`` and the vector-system identity for weight 0, index 1."""
    if phi.weight != 0 or phi.index != 1:
        raise OrthoformsError(f"need weight 0 and index 1, got weight {phi.weight} index {phi.index}")
    if phi.prec <= 0:
        raise InsufficientPrecision("q0 invariants", required=1, available=phi.prec)
    lattice = phi.lattice
    c = Fraction(0)
    from_norms = Fraction(0)
    form = [[Fraction(0)] * lattice.rank for _ in range(lattice.rank)]
    for (n, y), value in phi.coeffs.items():
        if n == 0:
            c += value / 24
            from_norms += value * phi.zeta_norm(y)
            for i in range(lattice.rank):
                for j in range(lattice.rank):
                    form[i][j] += value * Fraction(y[i] * y[j], 4)
        elif n < 0:
            if n % Q_SCALE:
                raise OrthoformsError("q-exponents must be integral")
            c -= value * sigma(1, -n // Q_SCALE)
    if lattice.rank:
        from_norms /= 2 * lattice.rank
    residual = tuple(
        tuple(form[i][j] - 2 * c * lattice.gram[i][j] for j in range(lattice.rank)) for i in range(lattice.rank)
    )
    ok = all(x == 0 for row in residual for x in row)
    if not ok:
        logger.warning("vector-system identity fails for %s: residual %s", lattice.spec, residual)
    return Q0Invariants(c, from_norms, ok, residual)


def certification_bound(phi: JacobiExpansion) -> int:
    """Scaled q-truncation needed to see every singular coefficient up to periodicity."""
    t = phi.index
    if t is None or t.denominator != 1:
        raise OrthoformsError(f"classification needs an integral index, got {t}")
    if t == 0:
        return 1
    minima = phi.lattice.coset_minima(int(t))
    worst = max((cls.delta for cls in minima.values()), default=Fraction(0))
    bound = Fraction(Q_SCALE) * worst / (2 * t)
    return int(bound) + (0 if bound.denominator == 1 else 1)


def classify(phi: JacobiExpansion) -> str:
    """One of ``holomorphic``, ``weak`` or ``nearly-holomorphic``."""
    if phi.half_dual:
        raise OrthoformsError("zeta-exponents must lie in L' to classify")
    required = certification_bound(phi)
    if phi.prec < required:
        raise InsufficientPrecision("classification", required=required, available=phi.prec)
    if any(n < 0 for n, _ in phi.coeffs):
        return "nearly-holomorphic"
    if any(phi.hyperbolic_norm(key) < 0 for key in phi.coeffs):
        return "weak"
    return "holomorphic"


def parity_check(phi: JacobiExpansion) -> bool:
    """``f(n, l) = (-1)^k f(n, -l)`` for integral weight ``k``."""
    if phi.weight.denominator != 1:
        raise OrthoformsError("parity needs an integral weight")
    sign = -1 if int(phi.weight) % 2 else 1
    return all(phi[(n, _scale_vec(y, -1))] == sign * c for (n, y), c in phi.coeffs.items())


def periodicity_check(phi: JacobiExpansion) -> list[tuple[Key, Key]]:
    """Pairs of keys violating ``f(n, l) = f(n', l')`` for equal discriminant and ``l = l' mod tL``.

    Every known coefficient is compared with the one at the minimal-norm
    representative of its class, which has a smaller q-exponent and so is
    always inside the truncation.
    """
    t = phi.index
    if t is None or t.denominator != 1 or t < 1:
        raise OrthoformsError(f"periodicity needs a positive integral index, got {t}")
    lattice = phi.lattice
    minima = lattice.coset_minima(int(t))
    failures = []
    for (n, y), c in phi.coeffs.items():
        coords = lattice.from_pairing([Fraction(x, 2) for x in y])
        cls = minima[tuple(x % int(t) for x in coords)]
        rep = cls.representative.coords
        rep_y = tuple(int(2 * x) for x in lattice.pairing(rep))
        shift = (phi.zeta_norm(y) - cls.delta) * Q_SCALE / (2 * t)
        if shift.denominator != 1:
            failures.append(((n, y), (n, rep_y)))
            continue
        other = (n - int(shift), rep_y)
        if phi[other] != c:
            failures.append(((n, y), other))
    return failures


def support_bound_warnings(phi: JacobiExpansion) -> list[Zeta]:
    """q^0 exponents that are not of minimal norm in their class (soft check, index 1)."""
    if phi.index != 1:
        return []
    lattice = phi.lattice
    offending = []
    for y, value in phi.layer(0).items():
        coords = lattice.from_pairing([Fraction(x, 2) for x in y])
        cls = lattice.class_of(coords)
        if phi.zeta_norm(y) > cls.delta:
            offending.append(y)
    if offending:
        logger.warning("%d q^0 exponents exceed the minimal norm of their class", len(offending))
    return sorted(offending)


def singular_keys(phi: JacobiExpansion, *, include_zero: bool = False) -> Iterable[Key]:
    for key in sorted(phi.coeffs):
        h = phi.hyperbolic_norm(key)
        if h < 0 or (include_zero and h == 0):
            yield key


def _is_primitive(key: Key) -> bool:
    """No ``d >= 2`` with ``(n / d^2, l / d)`` again a pair of exponents in ``L'``."""
    n, y = key
    g = gcd(*(abs(x) // 2 for x in y)) if all(x % 2 == 0 for x in y) else 1
    for d in range(2, g + 1):
        if g % d == 0 and n % (d * d * Q_SCALE) == 0:
            return False
    return True


def divisor_data(phi: JacobiExpansion) -> list[tuple[Key, Fraction]]:
    """``delta(n, l) = sum_{d >= 1} f(d^2 n, d l)`` for primitive singular ``(n, l)`` with ``l != 0``."""
    top_norm = max((phi.zeta_norm(z) for z in phi.layer(0)), default=Fraction(0))
    floor = phi.valuation or 0
    out = []
    for n, y in singular_keys(phi):
        if n > 0 or not any(y) or not _is_primitive((n, y)):
            continue
        total = Fraction(0)
        d = 1
        while True:
            key = (d * d * n, _scale_vec(y, d))
            if n < 0 and key[0] < floor:
                break
            if n == 0 and phi.zeta_norm(key[1]) > top_norm:
                break
            total += phi[key]
            d += 1
        if total:
            out.append(((n, y), total))
    return out
