"""Small helpers: bounded thread pools and RNG construction."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

THREADS_ENV = "FRACTAL_SPECTRUM_THREADS"


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def parallel_map(fn, items) -> list:
    """``[fn(x) for x in items]``, optionally threaded; output order is fixed."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def rng(seed=None) -> np.random.Generator:
    return np.random.default_rng(seed)
