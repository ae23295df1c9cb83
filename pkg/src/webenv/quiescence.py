"""Network-quiescence detection over request start/end event streams.

A page is quiet once no countable request has been active for a full idle
window. Requests outstanding longer than a threshold stop counting, so
long-polling and streaming connections cannot block quiescence forever.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

DEFAULT_IDLE_WINDOW = 0.5
DEFAULT_TIMEOUT = 30.0
DEFAULT_LONG_REQUEST_THRESHOLD = 10.0

START = "start"
END = "end"


class DuplicateRequestId(ValueError):
    """A start event arrived for a request id that is already active."""


@dataclass(frozen=True)
class NetworkEvent:
    kind: str
    id: str
    t: float

    def to_dict(self) -> dict:
        return {"kind": self.kind, "id": self.id, "t": self.t}

    @classmethod
    def from_dict(cls, data: dict) -> NetworkEvent:
        return cls(kind=str(data["kind"]), id=str(data["id"]), t=float(data["t"]))


@dataclass(frozen=True)
class Idle:
    at: float


@dataclass(frozen=True)
class TimedOut:
    outstanding: tuple[str, ...]


QuiescenceVerdict = Idle | TimedOut


@dataclass
class NetworkActivityLedger:
    """Single-owner per browser tab; tracks in-flight requests."""

    idle_window: float = DEFAULT_IDLE_WINDOW
    timeout: float = DEFAULT_TIMEOUT
    long_request_threshold: float = DEFAULT_LONG_REQUEST_THRESHOLD
    active: dict[str, float] = field(default_factory=dict)
    last_transition: float = 0.0

    def on_request_start(self, request_id: str, t: float) -> NetworkActivityLedger:
        if request_id in self.active:
            raise DuplicateRequestId(request_id)
        self.active[request_id] = t
        self.last_transition = max(self.last_transition, t)
        return self

    def on_request_end(self, request_id: str, t: float) -> NetworkActivityLedger:
        # End without a matching start is tolerated: instrumentation may
        # attach while requests are already in flight.
        self.active.pop(request_id, None)
        self.last_transition = max(self.last_transition, t)
        return self

    def reset(self) -> None:
        """Full page loads replace the request population."""
        self.active.clear()

    def open_request_starts(self) -> list[NetworkEvent]:
        """Start events for requests still in flight, for carrying across actions."""
        return [NetworkEvent(START, rid, t) for rid, t in sorted(self.active.items(), key=lambda kv: (kv[1], kv[0]))]


def _countable_intervals(
    events: Iterable[NetworkEvent], long_request_threshold: float
) -> list[tuple[float, float]]:
    per_id: dict[str, list[NetworkEvent]] = {}
    for ev in events:
        per_id.setdefault(ev.id, []).append(ev)

    intervals: list[tuple[float, float]] = []
    for evs in per_id.values():
        # Starts sort before ends at equal timestamps so pairing does not
        # depend on delivery order.
        evs.sort(key=lambda e: (e.t, 0 if e.kind == START else 1))
        open_start: float | None = None
        for ev in evs:
            if ev.kind == START:
                if open_start is None:
                    open_start = ev.t
            elif open_start is not None:
                intervals.append((open_start, ev.t))
                open_start = None
            # end without start: ignored
        if open_start is not None:
            intervals.append((open_start, math.inf))

    clipped = []
    for start, end in intervals:
        cutoff = min(end, start + long_request_threshold)
        if cutoff > start:
            clipped.append((start, cutoff))
    clipped.sort()
    merged: list[tuple[float, float]] = []
    for start, end in clipped:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def first_idle_instant(
    events: Iterable[NetworkEvent],
    idle_window: float = DEFAULT_IDLE_WINDOW,
    timeout: float = DEFAULT_TIMEOUT,
    long_request_threshold: float = DEFAULT_LONG_REQUEST_THRESHOLD,
    action_time: float = 0.0,
) -> QuiescenceVerdict:
    """The earliest instant at which a full idle window has elapsed.

    Busy intervals are half-open [start, end): a request no longer counts at
    the instant it completes, and counts from the instant it starts.
    """
    events = list(events)
    deadline = action_time + timeout
    busy = _countable_intervals(events, long_request_threshold)

    gaps: list[tuple[float, float]] = []
    cursor = -math.inf
    for start, end in busy:
        gaps.append((cursor, start))
        cursor = end
    gaps.append((cursor, math.inf))

    for gap_start, gap_end in gaps:
        tau = max(gap_start, action_time) + idle_window
        if tau > deadline:
            break
        if tau < gap_end:
            return Idle(at=tau)

    blockers = sorted(
        {
            ev.id
            for ev in events
            if ev.kind == START
            and any(start <= deadline < end for start, end in _id_intervals(events, ev.id, long_request_threshold))
        }
    )
    return TimedOut(outstanding=tuple(blockers))


def _id_intervals(events: list[NetworkEvent], request_id: str, threshold: float) -> list[tuple[float, float]]:
    return _countable_intervals([e for e in events if e.id == request_id], threshold)


def load_trace(path: str | Path) -> list[NetworkEvent]:
    """Read a JSON-lines event trace of {kind, id, t} records."""
    out: list[NetworkEvent] = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            out.append(NetworkEvent.from_dict(json.loads(line)))
    return out


def dump_trace(events: Iterable[NetworkEvent], path: str | Path) -> None:
    Path(path).write_text("".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in events))
