"""Check results and a small deterministic task runner."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

STATUSES = ("pass", "fail", "skip", "finding")


@dataclass
class CheckResult:
    id: str
    status: str
    expected: str
    actual: str
    witness: str | None = None
    millis: int | None = field(default=None, compare=False)
    note: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status in ("fail", "finding") and not self.witness:
            raise ValueError(f"{self.status} result {self.id!r} needs a witness")

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return asdict(self)


def check(cid: str, ok: bool, expected, actual, witness=None, *, note: str | None = None) -> CheckResult:
    """pass/fail result; a failure without an explicit witness reports the actual value."""
    if not ok and witness is None:
        witness = f"observed {actual}"
    return CheckResult(cid, "pass" if ok else "fail", str(expected), str(actual),
                       None if witness is None else str(witness), note=note)


def skip(cid: str, expected: str, note: str) -> CheckResult:
    return CheckResult(cid, "skip", expected, "not computed", note=note)


@contextmanager
def stopwatch():
    box = {"millis": 0}
    start = time.perf_counter()
    try:
        yield box
    finally:
        box["millis"] = int(round((time.perf_counter() - start) * 1000))


Task = Callable[[], Iterable[CheckResult]]


def _timed(task: Task) -> list[CheckResult]:
    with stopwatch() as sw:
        results = list(task())
    # a task's wall time is charged to each of its results that lacks its own timing
    for r in results:
        if r.millis is None:
            r.millis = sw["millis"]
    return results


def run_tasks(tasks: Iterable[Task], jobs: int = 1) -> list[CheckResult]:
    """Run independent check tasks, merging results sorted by check id."""
    tasks = list(tasks)
    if jobs <= 1:
        batches = [_timed(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_timed, tasks))
    merged = [r for batch in batches for r in batch]
    ids = [r.id for r in merged]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate check ids: {dupes}")
    return sorted(merged, key=lambda r: r.id)


def summarize(results: Iterable[CheckResult]) -> dict[str, int]:
    counts = {s: 0 for s in STATUSES}
    for r in results:
        counts[r.status] += 1
    return counts
