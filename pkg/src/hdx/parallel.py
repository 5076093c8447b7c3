"""Deterministic chunked map: results never depend on the worker count.

Work items are split into fixed chunks by index; chunk results are merged
in chunk order, so one worker and eight produce byte-identical output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

CHUNK = 16


def chunked_map(items: Sequence[T], fn: Callable[[T], R], threads: int = 1) -> list[R]:
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    chunks = [items[k: k + CHUNK] for k in range(0, len(items), CHUNK)]

    def run(chunk):
        return [fn(it) for it in chunk]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        out: list[R] = []
        for part in pool.map(run, chunks):
            out.extend(part)
        return out
