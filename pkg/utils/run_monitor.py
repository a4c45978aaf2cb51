from __future__ import annotations

import logging
import threading
import time
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Deque, Dict, Iterator, List, Optional

log = logging.getLogger(__name__)


@dataclass
class RollingMetric:
    count: int = 0
    total: float = 0.0
    maximum: float = 0.0
    last: float = 0.0

    def add(self, value: float) -> None:
        self.count += 1
        self.total += value
        self.last = value
        if value > self.maximum:
            self.maximum = value

    @property
    def average(self) -> float:
        if not self.count:
            return 0.0
        return self.total / self.count


class RunMonitor:
    """Collects lightweight timing metrics for fixpoints, searches and checks."""

    def __init__(self, slow_task_ms: float = 10_000.0) -> None:
        self.slow_task_ms = slow_task_ms
        self._started_monotonic = time.monotonic()
        self._task_metrics: Dict[str, RollingMetric] = {}
        self._task_recent: Deque[Dict[str, Any]] = deque(maxlen=40)
        self._events: Deque[Dict[str, Any]] = deque(maxlen=40)
        self._gauges: Dict[str, float] = {}
        self._lock = threading.Lock()

    @contextmanager
    def track(self, name: str, **context: Any) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        finally:
            self.record_task(name, (time.perf_counter() - started) * 1000.0, context)

    def record_task(self, name: str, duration_ms: float, context: Optional[Dict[str, Any]] = None) -> None:
        with self._lock:
            metric = self._task_metrics.setdefault(name, RollingMetric())
            metric.add(duration_ms)
            self._task_recent.appendleft({"name": name, "duration_ms": duration_ms, "context": context or {}})
        if duration_ms > self.slow_task_ms:
            self._record_event(name="task.slow", duration_ms=duration_ms, context={"task": name, **(context or {})})

    def set_gauge(self, name: str, value: float) -> None:
        with self._lock:
            self._gauges[name] = float(value)

    def get_gauge(self, name: str, default: float = 0.0) -> float:
        return self._gauges.get(name, default)

    def _record_event(self, *, name: str, duration_ms: float, context: Optional[Dict[str, Any]] = None) -> None:
        entry = {"name": name, "duration_ms": duration_ms, "context": context or {}}
        with self._lock:
            self._events.appendleft(entry)
        log.info("Event %s duration=%.1fms context=%s", name, duration_ms, entry["context"])

    def reset(self) -> None:
        with self._lock:
            self._task_metrics.clear()
            self._task_recent.clear()
            self._events.clear()
            self._gauges.clear()
            self._started_monotonic = time.monotonic()

    def snapshot(self) -> Dict[str, Any]:
        with self._lock:
            task_stats = [
                {
                    "name": key,
                    "count": metric.count,
                    "avg_ms": metric.average,
                    "max_ms": metric.maximum,
                    "last_ms": metric.last,
                }
                for key, metric in sorted(
                    self._task_metrics.items(),
                    key=lambda item: item[1].total,
                    reverse=True,
                )
            ]
            return {
                "uptime_seconds": time.monotonic() - self._started_monotonic,
                "tasks": task_stats,
                "task_recent": list(self._task_recent),
                "gauges": dict(self._gauges),
                "events": list(self._events),
            }

    def render_table(self, snapshot: Optional[Dict[str, Any]] = None) -> str:
        snap = snapshot if snapshot is not None else self.snapshot()
        rows: List[tuple[str, ...]] = [
            (
                entry.get("name", "-"),
                str(entry.get("count", 0)),
                f"{entry.get('avg_ms', 0.0):.1f}",
                f"{entry.get('max_ms', 0.0):.1f}",
            )
            for entry in snap.get("tasks", [])
        ]
        lines = [self._render_simple_table("Tasks", rows, headers=("Task", "Runs", "Avg ms", "Max ms"))]
        gauges = sorted(snap.get("gauges", {}).items())
        if gauges:
            lines.append(
                self._render_simple_table("Gauges", [(key, f"{value:g}") for key, value in gauges], headers=("Gauge", "Wert"))
            )
        return "\n".join(lines)

    @staticmethod
    def _render_simple_table(title: str, rows: List[tuple[str, ...]], *, headers: tuple[str, ...]) -> str:
        if not rows:
            return f"{title}\n  Keine Daten"
        widths = [max(len(headers[i]), *(len(row[i]) for row in rows)) for i in range(len(headers))]
        head = "  ".join(col.ljust(widths[i]) for i, col in enumerate(headers))
        body = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
        return "\n".join([title, head, "-" * len(head), *body])


default_monitor = RunMonitor()


__all__ = ["RollingMetric", "RunMonitor", "default_monitor"]
