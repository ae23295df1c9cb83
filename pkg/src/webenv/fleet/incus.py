"""Incus-compatible REST client speaking over the local Unix socket.

Covers the endpoints the fleet manager needs: OCI image import, instance
create/copy/start/stop/delete, snapshots and restore, and resource queries.
Asynchronous operations are awaited through /1.0/operations/{id}/wait.
"""

from __future__ import annotations

import logging
import os

import httpx

from webenv.fleet.types import (
    CloneFailed,
    FleetError,
    ImageRef,
    LaunchFailed,
    NameCollision,
    PullFailed,
    ResetFailed,
    SnapshotFailed,
)

logger = logging.getLogger(__name__)

DEFAULT_SOCKET_CANDIDATES = (
    "/var/lib/incus/unix.socket",
    "/var/snap/lxd/common/lxd/unix.socket",
    "/var/lib/lxd/unix.socket",
)
RUNTIME_SOCKET_ENV = "WEBENV_RUNTIME_SOCKET"
OPERATION_WAIT_S = 120


def default_runtime_socket() -> str | None:
    configured = os.environ.get(RUNTIME_SOCKET_ENV)
    if configured:
        return configured
    for candidate in DEFAULT_SOCKET_CANDIDATES:
        if os.path.exists(candidate):
            return candidate
    return None


class IncusRestClient:
    """RuntimeClient implementation over an Incus/LXD REST socket."""

    def __init__(self, socket_path: str, storage_pool: str = "default", app_port: int = 80, oci_server: str = "https://docker.io"):
        self.socket_path = socket_path
        self.storage_pool = storage_pool
        self.app_port = app_port
        self.oci_server = oci_server
        self._client = httpx.Client(
            transport=httpx.HTTPTransport(uds=socket_path),
            base_url="http://incus",
            timeout=60.0,
        )

    def close(self) -> None:
        self._client.close()

    # -- plumbing -----------------------------------------------------------

    def _request(self, method: str, path: str, error: type[FleetError], json_body: dict | None = None) -> dict:
        try:
            response = self._client.request(method, path, json=json_body)
        except httpx.HTTPError as exc:
            raise error(f"{method} {path}: {exc}") from exc
        try:
            payload = response.json()
        except ValueError as exc:
            raise error(f"{method} {path}: non-JSON response") from exc
        if payload.get("type") == "error" or response.status_code >= 400:
            raise error(f"{method} {path}: {payload.get('error') or response.status_code}")
        if payload.get("type") == "async":
            return self._wait_operation(payload["operation"], error)
        return payload

    def _wait_operation(self, operation_path: str, error: type[FleetError]) -> dict:
        payload = self._request("GET", f"{operation_path}/wait?timeout={OPERATION_WAIT_S}", error)
        metadata = payload.get("metadata") or {}
        if metadata.get("status_code", 200) >= 400 or metadata.get("err"):
            raise error(f"operation failed: {metadata.get('err') or metadata.get('status')}")
        return payload

    # -- RuntimeClient surface -------------------------------------------------

    def ping(self) -> bool:
        try:
            self._request("GET", "/1.0", FleetError)
            return True
        except FleetError:
            return False

    def import_image(self, ref: ImageRef) -> ImageRef:
        if ref.digest and self._image_exists(ref.digest):
            return ref
        body = {
            "source": {
                "type": "image",
                "mode": "pull",
                "protocol": "oci",
                "server": self.oci_server,
                "alias": ref.name,
            },
            "aliases": [{"name": _alias(ref.name)}],
        }
        payload = self._request("POST", "/1.0/images", PullFailed, body)
        fingerprint = (payload.get("metadata") or {}).get("metadata", {}).get("fingerprint", "")
        if ref.digest and fingerprint and ref.digest != fingerprint:
            raise PullFailed(f"digest mismatch for {ref.name}: {fingerprint}")
        return ImageRef(name=ref.name, source=ref.source, digest=fingerprint or ref.digest)

    def _image_exists(self, digest: str) -> bool:
        try:
            self._request("GET", f"/1.0/images/{digest}", PullFailed)
            return True
        except PullFailed:
            return False

    def create_instance(
        self,
        name: str,
        *,
        image_digest: str | None = None,
        copy_from: str | None = None,
        copy_snapshot: str | None = None,
        host_port: int = 0,
    ) -> None:
        if image_digest is not None:
            source: dict = {"type": "image", "fingerprint": image_digest}
            error: type[FleetError] = LaunchFailed
        elif copy_snapshot is not None:
            source = {"type": "copy", "source": f"{copy_from}/{copy_snapshot}"}
            error = CloneFailed
        else:
            source = {"type": "copy", "source": copy_from, "live": False}
            error = CloneFailed
        body = {
            "name": name,
            "source": source,
            "devices": {
                "app-port": {
                    "type": "proxy",
                    "listen": f"tcp:127.0.0.1:{host_port}",
                    "connect": f"tcp:127.0.0.1:{self.app_port}",
                }
            },
        }
        self._request("POST", "/1.0/instances", error, body)

    def start_instance(self, name: str) -> None:
        self._set_state(name, "start", LaunchFailed)

    def stop_instance(self, name: str) -> None:
        self._set_state(name, "stop", FleetError)

    def _set_state(self, name: str, action: str, error: type[FleetError]) -> None:
        self._request("PUT", f"/1.0/instances/{name}/state", error, {"action": action, "timeout": 60, "force": action == "stop"})

    def delete_instance(self, name: str) -> None:
        try:
            self._request("DELETE", f"/1.0/instances/{name}", FleetError)
        except FleetError:
            if self.instance_exists(name):
                raise

    def snapshot_instance(self, name: str, snapshot: str) -> None:
        if self.has_snapshot(name, snapshot):
            raise NameCollision(f"snapshot {snapshot!r} already exists on {name}")
        self._request("POST", f"/1.0/instances/{name}/snapshots", SnapshotFailed, {"name": snapshot, "stateful": False})

    def has_snapshot(self, name: str, snapshot: str) -> bool:
        try:
            self._request("GET", f"/1.0/instances/{name}/snapshots/{snapshot}", SnapshotFailed)
            return True
        except SnapshotFailed:
            return False

    def restore_snapshot(self, name: str, snapshot: str) -> None:
        self._request("PUT", f"/1.0/instances/{name}", ResetFailed, {"restore": snapshot})

    def instance_exists(self, name: str) -> bool:
        try:
            self._request("GET", f"/1.0/instances/{name}", FleetError)
            return True
        except FleetError:
            return False

    def storage_used(self) -> int:
        payload = self._request("GET", f"/1.0/storage-pools/{self.storage_pool}/resources", FleetError)
        return int((payload.get("metadata") or {}).get("space", {}).get("used", 0))

    def instance_memory(self, name: str) -> int:
        payload = self._request("GET", f"/1.0/instances/{name}/state", FleetError)
        return int((payload.get("metadata") or {}).get("memory", {}).get("usage", 0))


def _alias(name: str) -> str:
    return name.replace("/", "-").replace(":", "-")
