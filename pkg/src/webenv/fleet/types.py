"""Domain types and errors for the container fleet manager."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum


class ContainerState(str, Enum):
    STARTING = "Starting"
    RUNNING = "Running"
    STOPPED = "Stopped"
    DESTROYED = "Destroyed"


# Legal lifecycle transitions; Running->Running covers reset.
LEGAL_TRANSITIONS: dict[ContainerState, frozenset[ContainerState]] = {
    ContainerState.STARTING: frozenset({ContainerState.RUNNING, ContainerState.STOPPED}),
    ContainerState.RUNNING: frozenset({ContainerState.RUNNING, ContainerState.STOPPED}),
    ContainerState.STOPPED: frozenset({ContainerState.DESTROYED}),
    ContainerState.DESTROYED: frozenset(),
}


class FleetError(RuntimeError):
    pass


class PullFailed(FleetError):
    pass


class DigestMismatch(FleetError):
    pass


class LaunchFailed(FleetError):
    pass


class HealthTimeout(FleetError):
    pass


class PortExhausted(FleetError):
    pass


class SnapshotFailed(FleetError):
    pass


class NameCollision(FleetError):
    pass


class CloneFailed(FleetError):
    pass


class ResetFailed(FleetError):
    pass


class IllegalTransition(FleetError):
    pass


@dataclass(frozen=True)
class ImageRef:
    name: str
    source: str = "oci-registry"  # oci-registry | local-import
    digest: str = ""


@dataclass(frozen=True)
class SnapshotRef:
    name: str
    parent_id: str
    created_at: float = field(default_factory=time.time)


@dataclass
class ContainerHandle:
    id: str
    origin: str  # image digest or "<container>/<snapshot>"
    state: ContainerState = ContainerState.STARTING
    endpoint: str | None = None
    created_at: float = field(default_factory=time.time)
    labels: dict[str, str] = field(default_factory=dict)

    @property
    def role(self) -> str:
        return self.labels.get("role", "web-server")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "origin": self.origin,
            "state": self.state.value,
            "endpoint": self.endpoint,
            "created_at": self.created_at,
            "labels": dict(self.labels),
        }


@dataclass(frozen=True)
class Healthy:
    pass


@dataclass(frozen=True)
class Unhealthy:
    detail: str


HealthVerdict = Healthy | Unhealthy


@dataclass
class LaunchStats:
    launch_latency: float  # seconds
    storage_delta: int  # bytes written by the launch
    memory_rss: int  # bytes

    def __post_init__(self) -> None:
        if self.launch_latency < 0 or self.storage_delta < 0 or self.memory_rss < 0:
            raise ValueError("launch stats must be non-negative")


@dataclass
class LaunchStatsSummary:
    samples: list[LaunchStats]
    latency_mean: float
    latency_stddev: float
    storage_delta_mean: float
    memory_rss_mean: float

    def to_dict(self) -> dict:
        return {
            "samples": len(self.samples),
            "latency_mean_s": self.latency_mean,
            "latency_stddev_s": self.latency_stddev,
            "storage_delta_mean_bytes": self.storage_delta_mean,
            "memory_rss_mean_bytes": self.memory_rss_mean,
        }
