"""Optional thread fan-out, capped by the SUPERGEO_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("SUPERGEO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def thread_map(fn, items) -> list:
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
