"""Snapshot-capable container fleet: launch, clone, reset, benchmark."""

from webenv.fleet.config import FleetConfig
from webenv.fleet.fake_runtime import FakeRuntime, FakeRuntimeConfig
from webenv.fleet.incus import IncusRestClient, default_runtime_socket
from webenv.fleet.manager import FleetManager, PortAllocator
from webenv.fleet.types import (
    CloneFailed,
    ContainerHandle,
    ContainerState,
    DigestMismatch,
    FleetError,
    HealthTimeout,
    Healthy,
    IllegalTransition,
    ImageRef,
    LaunchFailed,
    LaunchStats,
    LaunchStatsSummary,
    NameCollision,
    PortExhausted,
    PullFailed,
    ResetFailed,
    SnapshotFailed,
    SnapshotRef,
    Unhealthy,
)

__all__ = [
    "CloneFailed",
    "ContainerHandle",
    "ContainerState",
    "DigestMismatch",
    "FakeRuntime",
    "FakeRuntimeConfig",
    "FleetConfig",
    "FleetError",
    "FleetManager",
    "HealthTimeout",
    "Healthy",
    "IllegalTransition",
    "ImageRef",
    "IncusRestClient",
    "LaunchFailed",
    "LaunchStats",
    "LaunchStatsSummary",
    "NameCollision",
    "PortAllocator",
    "PortExhausted",
    "PullFailed",
    "ResetFailed",
    "SnapshotFailed",
    "SnapshotRef",
    "Unhealthy",
    "default_runtime_socket",
]
