"""The narrow runtime surface the fleet manager drives.

Two implementations exist: an Incus-compatible REST client for real hosts,
and an in-process fake with real per-instance HTTP servers for tests.
"""

from __future__ import annotations

from typing import Protocol

from webenv.fleet.types import ImageRef


class RuntimeClient(Protocol):
    def ping(self) -> bool:
        """True when the runtime is reachable."""
        ...

    def import_image(self, ref: ImageRef) -> ImageRef:
        """Ensure the image exists in the runtime store; returns ref with digest."""
        ...

    def create_instance(self, name: str, *, image_digest: str | None, copy_from: str | None,
                        copy_snapshot: str | None, host_port: int) -> None:
        """Create a stopped instance from an image or by copying a container/snapshot."""
        ...

    def start_instance(self, name: str) -> None: ...

    def stop_instance(self, name: str) -> None: ...

    def delete_instance(self, name: str) -> None: ...

    def snapshot_instance(self, name: str, snapshot: str) -> None: ...

    def has_snapshot(self, name: str, snapshot: str) -> bool: ...

    def restore_snapshot(self, name: str, snapshot: str) -> None: ...

    def instance_exists(self, name: str) -> bool: ...

    def storage_used(self) -> int:
        """Bytes used in the backing storage pool."""
        ...

    def instance_memory(self, name: str) -> int:
        """Resident memory of a running instance, in bytes."""
        ...
