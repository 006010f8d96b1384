"""Thread pool honoring the ``PLATELAB_THREADS`` cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    raw = os.environ.get("PLATELAB_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"PLATELAB_THREADS must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"PLATELAB_THREADS must be a positive integer, got {raw!r}")
        return n
    return os.cpu_count() or 1


def map_ordered(func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[func(x) for x in items]``, possibly in parallel; order is preserved."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))
