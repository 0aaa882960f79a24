"""Ordered worker-pool map shared by the sweep drivers."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional


def default_workers() -> int:
    """Worker count from ``OPSF_THREADS`` (default 1)."""
    raw = os.environ.get("OPSF_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn: Callable, items: Iterable, workers: Optional[int] = None) -> list:
    """``list(map(fn, items))`` with results in input order regardless of pool size."""
    items = list(items)
    workers = default_workers() if workers is None else workers
    cap = default_workers() if os.environ.get("OPSF_THREADS") else workers
    workers = min(workers, cap, len(items) or 1)
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
