"""Reference tables shipped as YAML under ``configs/``, validated into pydantic models."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml

from .models import AppendixRow, HilbertItem, Norm2Table

CONFIG_DIR = Path(__file__).parent / "configs"


def _load(name: str) -> Any:
    with open(CONFIG_DIR / name, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


@lru_cache(maxsize=None)
def appendix_rows() -> tuple[AppendixRow, ...]:
    """The 147 family rows followed by the 17 predicted E-type rows."""
    return tuple(AppendixRow.model_validate(row) for row in _load("appendix.yml")["rows"])


@lru_cache(maxsize=None)
def hilbert_items() -> tuple[HilbertItem, ...]:
    return tuple(HilbertItem.model_validate(item) for item in _load("hilbert_series.yml")["items"])


def hilbert_item(lattice: str) -> HilbertItem:
    for item in hilbert_items():
        if item.lattice == lattice:
            return item
    raise KeyError(lattice)


@lru_cache(maxsize=None)
def norm2_table() -> Norm2Table:
    return Norm2Table.model_validate({"groups": _load("norm2.yml")})


@lru_cache(maxsize=None)
def delta_table() -> dict[str, Fraction]:
    return {label: Fraction(str(value)) for label, value in _load("delta.yml")["delta"].items()}
