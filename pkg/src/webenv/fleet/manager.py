"""Fleet manager: launch, snapshot, clone, reset, and benchmark containers."""

from __future__ import annotations

import logging
import statistics
import threading
import time
import uuid

import httpx

from webenv.fleet.runtime import RuntimeClient
from webenv.fleet.types import (
    CloneFailed,
    ContainerHandle,
    ContainerState,
    HealthTimeout,
    Healthy,
    HealthVerdict,
    IllegalTransition,
    ImageRef,
    LEGAL_TRANSITIONS,
    LaunchStats,
    LaunchStatsSummary,
    PortExhausted,
    ResetFailed,
    SnapshotFailed,
    SnapshotRef,
    Unhealthy,
)

logger = logging.getLogger(__name__)

# Below common ephemeral-port floors so client sockets never collide with
# allocated endpoints.
DEFAULT_PORT_RANGE = (10000, 10999)
HEALTH_PROBE_CAP_S = 60.0


class PortAllocator:
    """Compare-and-claim allocation from a contiguous range."""

    def __init__(self, port_range: tuple[int, int] = DEFAULT_PORT_RANGE):
        if port_range[0] > port_range[1]:
            raise ValueError("empty port range")
        self._range = port_range
        self._claimed: set[int] = set()
        self._lock = threading.Lock()

    def claim(self) -> int:
        with self._lock:
            for port in range(self._range[0], self._range[1] + 1):
                if port not in self._claimed:
                    self._claimed.add(port)
                    return port
        raise PortExhausted(f"no free port in {self._range[0]}..{self._range[1]}")

    def release(self, port: int) -> None:
        with self._lock:
            self._claimed.discard(port)

    @property
    def claimed_count(self) -> int:
        with self._lock:
            return len(self._claimed)


class FleetManager:
    """Shared, internally synchronized owner of all container handles.

    Calls on distinct handles proceed in parallel; calls touching the same
    handle serialize on its per-handle lock.
    """

    def __init__(
        self,
        runtime: RuntimeClient,
        port_range: tuple[int, int] = DEFAULT_PORT_RANGE,
        probe_path: str = "/health",
        probe_cap_s: float = HEALTH_PROBE_CAP_S,
    ):
        self.runtime = runtime
        self.probe_path = probe_path
        self.probe_cap_s = probe_cap_s
        self._ports = PortAllocator(port_range)
        self._handles: dict[str, ContainerHandle] = {}
        self._handle_locks: dict[str, threading.Lock] = {}
        self._snapshots: dict[tuple[str, str], SnapshotRef] = {}
        self._lock = threading.Lock()

    # -- images ----------------------------------------------------------------

    def import_image(self, ref: ImageRef) -> ImageRef:
        return self.runtime.import_image(ref)

    # -- lifecycle ---------------------------------------------------------------

    def launch(self, origin: ImageRef | SnapshotRef | ContainerHandle, labels: dict[str, str] | None = None) -> ContainerHandle:
        """Start a fresh container from an image, snapshot, or live container."""
        name = f"we-{uuid.uuid4().hex[:12]}"
        port = self._ports.claim()
        handle = ContainerHandle(id=name, origin=_origin_key(origin), labels=dict(labels or {}))
        with self._lock:
            self._handles[name] = handle
            self._handle_locks[name] = threading.Lock()
        try:
            if isinstance(origin, ImageRef):
                digest = origin.digest or self.runtime.import_image(origin).digest
                self.runtime.create_instance(name, image_digest=digest, copy_from=None, copy_snapshot=None, host_port=port)
            elif isinstance(origin, SnapshotRef):
                self.runtime.create_instance(
                    name, image_digest=None, copy_from=origin.parent_id, copy_snapshot=origin.name, host_port=port
                )
            else:
                self._require_live(origin)
                self.runtime.create_instance(
                    name, image_digest=None, copy_from=origin.id, copy_snapshot=None, host_port=port
                )
            self.runtime.start_instance(name)
            endpoint = f"127.0.0.1:{port}"
            self._probe_until_healthy(endpoint)
            self._transition(handle, ContainerState.RUNNING)
            handle.endpoint = endpoint
            return handle
        except Exception:
            self._cleanup_failed(handle, port)
            raise

    def clone(self, origin: ContainerHandle | SnapshotRef) -> ContainerHandle:
        """Copy-on-write copy whose application state equals the origin's."""
        role_labels: dict[str, str] = {}
        if isinstance(origin, ContainerHandle):
            role_labels = dict(origin.labels)
        return self.launch(origin, role_labels)

    def snapshot(self, handle: ContainerHandle, name: str) -> SnapshotRef:
        with self._handle_lock(handle):
            if handle.state not in (ContainerState.RUNNING, ContainerState.STOPPED):
                raise SnapshotFailed(f"container {handle.id} is {handle.state.value}")
            self.runtime.snapshot_instance(handle.id, name)
            ref = SnapshotRef(name=name, parent_id=handle.id)
            with self._lock:
                self._snapshots[(handle.id, name)] = ref
            return ref

    def reset(self, handle: ContainerHandle, to: SnapshotRef) -> ContainerHandle:
        """Restore filesystem and process state; the endpoint is preserved."""
        with self._handle_lock(handle):
            if handle.state is not ContainerState.RUNNING:
                raise ResetFailed(f"container {handle.id} is {handle.state.value}")
            if to.parent_id != handle.id:
                raise ResetFailed(f"snapshot {to.name!r} belongs to {to.parent_id}, not {handle.id}")
            self.runtime.restore_snapshot(handle.id, to.name)
            assert handle.endpoint is not None
            self._probe_until_healthy(handle.endpoint)
            self._transition(handle, ContainerState.RUNNING)
            return handle

    def destroy(self, handle: ContainerHandle) -> None:
        """Idempotent teardown; legal from any state."""
        with self._handle_lock(handle):
            if handle.state is ContainerState.DESTROYED:
                return
            if handle.state in (ContainerState.STARTING, ContainerState.RUNNING):
                try:
                    self.runtime.stop_instance(handle.id)
                except Exception:  # instance may never have materialized
                    logger.debug("stop during destroy failed for %s", handle.id, exc_info=True)
                self._transition(handle, ContainerState.STOPPED)
            self.runtime.delete_instance(handle.id)
            self._transition(handle, ContainerState.DESTROYED)
            if handle.endpoint:
                self._ports.release(int(handle.endpoint.rsplit(":", 1)[1]))
                handle.endpoint = None
        with self._lock:
            self._snapshots = {k: v for k, v in self._snapshots.items() if k[0] != handle.id}

    def list(self, role: str | None = None, state: ContainerState | None = None) -> list[ContainerHandle]:
        with self._lock:
            handles = list(self._handles.values())
        if role is not None:
            handles = [h for h in handles if h.labels.get("role") == role]
        if state is not None:
            handles = [h for h in handles if h.state is state]
        return handles

    def live_count(self) -> int:
        return len([h for h in self.list() if h.state is not ContainerState.DESTROYED])

    def get(self, container_id: str) -> ContainerHandle | None:
        with self._lock:
            return self._handles.get(container_id)

    def health_check(self, handle: ContainerHandle) -> HealthVerdict:
        if handle.state is not ContainerState.RUNNING or not handle.endpoint:
            return Unhealthy(detail=f"state is {handle.state.value}")
        try:
            response = httpx.get(f"http://{handle.endpoint}{self.probe_path}", timeout=2.0)
        except httpx.HTTPError as exc:
            return Unhealthy(detail=str(exc))
        if response.status_code >= 400:
            return Unhealthy(detail=f"probe returned {response.status_code}")
        return Healthy()

    # -- benchmarking ---------------------------------------------------------------

    def measure_launch(
        self,
        origin: ImageRef | SnapshotRef,
        n: int,
        warmup: int = 2,
        keep: bool = False,
    ) -> LaunchStatsSummary:
        """Launch ``warmup`` containers to warm caches, then measure ``n`` more."""
        if n < 1:
            raise ValueError("need at least one sample")
        for _ in range(warmup):
            self.destroy(self.launch(origin, {"role": "bench-warmup"}))

        samples: list[LaunchStats] = []
        launched: list[ContainerHandle] = []
        try:
            for _ in range(n):
                before = self.runtime.storage_used()
                t0 = time.monotonic()
                handle = self.launch(origin, {"role": "bench"})
                latency = time.monotonic() - t0
                launched.append(handle)
                samples.append(
                    LaunchStats(
                        launch_latency=latency,
                        storage_delta=max(self.runtime.storage_used() - before, 0),
                        memory_rss=self.runtime.instance_memory(handle.id),
                    )
                )
        finally:
            if not keep:
                for handle in launched:
                    self.destroy(handle)

        latencies = [s.launch_latency for s in samples]
        return LaunchStatsSummary(
            samples=samples,
            latency_mean=statistics.fmean(latencies),
            latency_stddev=statistics.stdev(latencies) if len(latencies) > 1 else 0.0,
            storage_delta_mean=statistics.fmean(s.storage_delta for s in samples),
            memory_rss_mean=statistics.fmean(s.memory_rss for s in samples),
        )

    # -- internals ---------------------------------------------------------------------

    def _handle_lock(self, handle: ContainerHandle) -> threading.Lock:
        with self._lock:
            lock = self._handle_locks.get(handle.id)
            if lock is None:
                lock = self._handle_locks[handle.id] = threading.Lock()
            return lock

    def _require_live(self, handle: ContainerHandle) -> None:
        if handle.state is ContainerState.DESTROYED:
            raise CloneFailed(f"origin container {handle.id} is destroyed")

    def _transition(self, handle: ContainerHandle, new: ContainerState) -> None:
        if new not in LEGAL_TRANSITIONS[handle.state]:
            raise IllegalTransition(f"{handle.id}: {handle.state.value} -> {new.value}")
        handle.state = new

    def _probe_until_healthy(self, endpoint: str) -> None:
        url = f"http://{endpoint}{self.probe_path}"
        deadline = time.monotonic() + self.probe_cap_s
        delay = 0.02
        while True:
            try:
                response = httpx.get(url, timeout=2.0)
                if response.status_code < 400:
                    return
                detail = f"status {response.status_code}"
            except httpx.HTTPError as exc:
                detail = str(exc)
            if time.monotonic() >= deadline:
                raise HealthTimeout(f"{url}: {detail}")
            time.sleep(delay)
            delay = min(delay * 2, 1.0)

    def _cleanup_failed(self, handle: ContainerHandle, port: int) -> None:
        try:
            if self.runtime.instance_exists(handle.id):
                try:
                    self.runtime.stop_instance(handle.id)
                except Exception:
                    pass
                self.runtime.delete_instance(handle.id)
        except Exception:
            logger.warning("cleanup after failed launch of %s did not complete", handle.id, exc_info=True)
        self._ports.release(port)
        if handle.state is not ContainerState.DESTROYED:
            if handle.state in (ContainerState.STARTING, ContainerState.RUNNING):
                self._transition(handle, ContainerState.STOPPED)
            self._transition(handle, ContainerState.DESTROYED)


def _origin_key(origin: ImageRef | SnapshotRef | ContainerHandle) -> str:
    if isinstance(origin, ImageRef):
        return origin.digest or origin.name
    if isinstance(origin, SnapshotRef):
        return f"{origin.parent_id}/{origin.name}"
    return origin.id
