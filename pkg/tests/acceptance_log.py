"""Timed PASS/FAIL lines for the acceptance criteria."""

import time
from contextlib import contextmanager

LINES: list = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Run a block, record one line, and fail when it errors or exceeds ``limit`` seconds."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        _record(f"FAIL  criterion {number:>2}: {title} ({elapsed:.2f} s; {type(exc).__name__}: {exc})")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    _record(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} ({elapsed:.2f} s, limit {limit:g} s)")
    assert ok, f"criterion {number} took {elapsed:.2f} s, limit {limit} s"


def _record(line: str):
    LINES.append(line)
    print(line)
