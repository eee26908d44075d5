"""Deterministic fan-out of independent checks over a process pool."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

WORKERS_ENV = "DJKM_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return 1


def chunked(seq, n_chunks: int) -> list[list]:
    seq = list(seq)
    n_chunks = max(1, min(n_chunks, len(seq) or 1))
    size = -(-len(seq) // n_chunks)
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def run_chunks(fn, tasks, workers: int | None = None, chunks_per_worker: int = 4) -> list:
    """Apply ``fn(chunk) -> list`` over chunks of ``tasks``; results keep task order."""
    workers = default_workers() if workers is None else max(1, workers)
    tasks = list(tasks)
    if workers == 1 or len(tasks) < 2:
        return fn(tasks)
    parts = chunked(tasks, workers * chunks_per_worker)
    out = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for res in pool.map(fn, parts):
            out.extend(res)
    return out
