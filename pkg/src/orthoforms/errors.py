"""Exception hierarchy; everything is a ValueError so callers can stay coarse."""
from __future__ import annotations

from fractions import Fraction
from typing import Any


class OrthoformsError(ValueError):
    """Base class for every failure raised by the package."""


class LatticeSpecError(OrthoformsError):
    pass


class QOrderMismatch(OrthoformsError):
    def __init__(self, message: str, *, weight: Fraction, index: Fraction, q_order: Fraction):
        super().__init__(f"{message} (weight {weight}, index {index}, q-order {q_order})")
        self.weight = weight
        self.index = index
        self.q_order = q_order


class NonExactDivision(OrthoformsError):
    def __init__(self, order: int, residual: Any):
        super().__init__(f"division is not exact at scaled q-order {order}: residual {residual}")
        self.order = order
        self.residual = residual


class InsufficientPrecision(OrthoformsError):
    def __init__(self, what: str, *, required: int, available: int):
        super().__init__(f"{what}: need q-truncation {required}, have {available}")
        self.required = required
        self.available = available


class NonIntegralSingularPart(OrthoformsError):
    def __init__(self, n: Fraction, ell: tuple[int, ...], value: Fraction):
        super().__init__(f"singular coefficient f({n}, {ell}) = {value} is not an integer")
        self.n = n
        self.ell = ell
        self.value = value


class NegativeXiOrder(OrthoformsError):
    def __init__(self, c: Fraction):
        super().__init__(f"vanishing order C = {c} along the boundary is negative")
        self.c = c


class NonIntegralXiOrder(OrthoformsError):
    def __init__(self, c: Fraction):
        super().__init__(f"vanishing order C = {c} is not an integer; no xi-expansion exists")
        self.c = c


class FamilyViolation(OrthoformsError):
    pass


class Disagreement(OrthoformsError):
    def __init__(self, what: str, values: dict[str, Any]):
        shown = ", ".join(f"{k}={v}" for k, v in values.items())
        super().__init__(f"{what} disagree: {shown}")
        self.values = values
