"""Fan out per-entry table computations, limited by a semaphore."""
from __future__ import annotations

import asyncio
from typing import Callable, Iterable, TypeVar

from .constants import MAX_CONCURRENT_ENTRIES

T = TypeVar("T")
R = TypeVar("R")


async def map_entries(func: Callable[[T], R], items: Iterable[T], limit: int = MAX_CONCURRENT_ENTRIES) -> list[R]:
    """Apply ``func`` to every item in worker threads; results keep the input order."""
    sem = asyncio.Semaphore(limit)

    async def _run(item: T) -> R:
        async with sem:
            return await asyncio.to_thread(func, item)

    return await asyncio.gather(*(_run(item) for item in items))


def run_entries(func: Callable[[T], R], items: Iterable[T], limit: int = MAX_CONCURRENT_ENTRIES) -> list[R]:
    """Sync wrapper for the CLI."""
    return asyncio.run(map_entries(func, items, limit))
