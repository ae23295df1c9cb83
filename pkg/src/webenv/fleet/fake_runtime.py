"""In-process runtime fake with simulated latencies and storage accounting.

Every running instance is backed by a real local HTTP server rendering the
instance's application state, so isolation and reset oracles can operate
through actual endpoints exactly as they would against real containers.
"""

from __future__ import annotations

import hashlib
import html
import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from webenv.fleet.types import (
    CloneFailed,
    ImageRef,
    LaunchFailed,
    NameCollision,
    PullFailed,
    ResetFailed,
    SnapshotFailed,
)

MIB = 1024 * 1024


@dataclass
class FakeRuntimeConfig:
    # Latency and storage figures are scaled stand-ins for a block-level
    # copy-on-write host: cloning is ~10x cheaper than a cold materialization
    # and writes a few tens of MiB against a multi-GiB base image.
    cold_launch_s: float = 0.06
    clone_launch_s: float = 0.006
    snapshot_s: float = 0.002
    restore_s: float = 0.004
    image_size_bytes: int = 6942 * MIB
    clone_delta_bytes: int = 28 * MIB
    memory_base_bytes: int = 150 * MIB
    serve_http: bool = True


@dataclass
class _FakeInstance:
    name: str
    origin: str
    port: int
    app_state: dict[str, str] = field(default_factory=dict)
    snapshots: dict[str, dict[str, str]] = field(default_factory=dict)
    running: bool = False
    storage_delta: int = 0
    server: ThreadingHTTPServer | None = None
    server_thread: threading.Thread | None = None


def _render_page(instance: _FakeInstance) -> str:
    markers = "".join(
        f'<li data-marker="{html.escape(k, quote=True)}">{html.escape(k)}={html.escape(v)}</li>'
        for k, v in sorted(instance.app_state.items())
    )
    # Endpoint-invariant markup: clones of one snapshot must render
    # byte-identical pages so trajectory digests line up across episodes.
    return (
        "<html><head><title>Demo store</title></head><body>"
        "<h1>Demo store</h1>"
        f'<ul id="markers">{markers}</ul>'
        '<a href="/about">About this store</a>'
        '<form action="/set" method="get">'
        '<input type="text" name="key" placeholder="Marker key" value="" />'
        '<input type="text" name="value" placeholder="Marker value" value="" />'
        '<button type="submit">Save marker</button>'
        "</form></body></html>"
    )


class _AppHandler(BaseHTTPRequestHandler):
    instance: _FakeInstance  # set per-server subclass

    def do_GET(self) -> None:  # noqa: N802  (http.server API)
        parsed = urlparse(self.path)
        if parsed.path == "/health":
            self._send(200, "ok", "text/plain")
        elif parsed.path == "/state":
            self._send(200, json.dumps(self.instance.app_state, sort_keys=True), "application/json")
        elif parsed.path == "/set":
            query = parse_qs(parsed.query)
            key = query.get("key", [""])[0]
            value = query.get("value", [""])[0]
            if key:
                self.instance.app_state[key] = value
                self.instance.storage_delta += 4096  # a mutated block
            self._send(200, _render_page(self.instance), "text/html")
        elif parsed.path == "/about":
            self._send(200, "<html><head><title>About</title></head><body><p>A tiny fixture store.</p></body></html>", "text/html")
        else:
            self._send(200, _render_page(self.instance), "text/html")

    def do_POST(self) -> None:  # noqa: N802
        self.do_GET()

    def _send(self, code: int, body: str, content_type: str) -> None:
        payload = body.encode()
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args) -> None:  # silence request logging
        pass


class FakeRuntime:
    """Deterministic RuntimeClient standing in for a snapshot-capable host."""

    def __init__(self, config: FakeRuntimeConfig | None = None):
        self.config = config or FakeRuntimeConfig()
        self._images: dict[str, ImageRef] = {}
        self._instances: dict[str, _FakeInstance] = {}
        self._lock = threading.Lock()

    # -- images --------------------------------------------------------------

    def ping(self) -> bool:
        return True

    def import_image(self, ref: ImageRef) -> ImageRef:
        if not ref.name or ref.name.startswith("missing/"):
            raise PullFailed(f"image {ref.name!r} not found")
        digest = ref.digest or "sha256:" + hashlib.sha256(ref.name.encode()).hexdigest()
        with self._lock:
            known = self._images.get(ref.name)
            if known is not None:
                if ref.digest and known.digest != ref.digest:
                    raise PullFailed(f"digest mismatch for {ref.name}")
                return known
            imported = ImageRef(name=ref.name, source=ref.source, digest=digest)
            self._images[ref.name] = imported
            return imported

    def image_by_digest(self, digest: str) -> ImageRef | None:
        with self._lock:
            return next((i for i in self._images.values() if i.digest == digest), None)

    # -- instances -----------------------------------------------------------

    def create_instance(
        self,
        name: str,
        *,
        image_digest: str | None = None,
        copy_from: str | None = None,
        copy_snapshot: str | None = None,
        host_port: int = 0,
    ) -> None:
        with self._lock:
            if name in self._instances:
                raise LaunchFailed(f"instance {name!r} already exists")
            if image_digest is not None:
                if self._image_by_digest_unlocked(image_digest) is None:
                    raise LaunchFailed(f"image {image_digest!r} not in store")
                instance = _FakeInstance(name=name, origin=image_digest, port=host_port)
                instance.storage_delta = self.config.image_size_bytes
                cost = self.config.cold_launch_s
            else:
                source = self._instances.get(copy_from or "")
                if source is None:
                    raise CloneFailed(f"source instance {copy_from!r} does not exist")
                if copy_snapshot is not None:
                    if copy_snapshot not in source.snapshots:
                        raise CloneFailed(f"snapshot {copy_snapshot!r} does not exist on {copy_from!r}")
                    state = dict(source.snapshots[copy_snapshot])
                else:
                    state = dict(source.app_state)
                instance = _FakeInstance(
                    name=name,
                    origin=f"{copy_from}/{copy_snapshot}" if copy_snapshot else str(copy_from),
                    port=host_port,
                    app_state=state,
                )
                instance.snapshots = {snap: dict(s) for snap, s in source.snapshots.items()}
                instance.storage_delta = self.config.clone_delta_bytes
                cost = self.config.clone_launch_s
            self._instances[name] = instance
        time.sleep(cost)  # simulated copy work, outside the lock

    def _image_by_digest_unlocked(self, digest: str) -> ImageRef | None:
        return next((i for i in self._images.values() if i.digest == digest), None)

    def start_instance(self, name: str) -> None:
        instance = self._get(name)
        if instance.running:
            return
        if self.config.serve_http:
            handler = type("Handler", (_AppHandler,), {"instance": instance})
            try:
                server = ThreadingHTTPServer(("127.0.0.1", instance.port), handler)
            except OSError as exc:
                raise LaunchFailed(f"cannot bind port {instance.port}: {exc}") from exc
            server.daemon_threads = True
            thread = threading.Thread(target=lambda: server.serve_forever(poll_interval=0.02), daemon=True)
            thread.start()
            instance.server = server
            instance.server_thread = thread
        instance.running = True

    def stop_instance(self, name: str) -> None:
        instance = self._get(name)
        self._shutdown_server(instance)
        instance.running = False

    def delete_instance(self, name: str) -> None:
        with self._lock:
            instance = self._instances.pop(name, None)
        if instance is not None:
            self._shutdown_server(instance)

    def _shutdown_server(self, instance: _FakeInstance) -> None:
        if instance.server is not None:
            instance.server.shutdown()
            instance.server.server_close()
            instance.server = None
            instance.server_thread = None

    # -- snapshots -----------------------------------------------------------

    def snapshot_instance(self, name: str, snapshot: str) -> None:
        instance = self._get(name, error=SnapshotFailed)
        time.sleep(self.config.snapshot_s)
        if snapshot in instance.snapshots:
            raise NameCollision(f"snapshot {snapshot!r} already exists on {name}")
        # Taken live: no stop required.
        instance.snapshots[snapshot] = dict(instance.app_state)

    def has_snapshot(self, name: str, snapshot: str) -> bool:
        with self._lock:
            instance = self._instances.get(name)
        return instance is not None and snapshot in instance.snapshots

    def restore_snapshot(self, name: str, snapshot: str) -> None:
        instance = self._get(name, error=ResetFailed)
        if snapshot not in instance.snapshots:
            raise ResetFailed(f"no snapshot {snapshot!r} on {name}")
        time.sleep(self.config.restore_s)
        instance.app_state = dict(instance.snapshots[snapshot])
        instance.storage_delta += 1024  # metadata transaction

    # -- introspection ---------------------------------------------------------

    def instance_exists(self, name: str) -> bool:
        with self._lock:
            return name in self._instances

    def storage_used(self) -> int:
        with self._lock:
            image_bytes = self.config.image_size_bytes * len(self._images)
            return image_bytes + sum(i.storage_delta for i in self._instances.values())

    def instance_memory(self, name: str) -> int:
        instance = self._get(name)
        return self.config.memory_base_bytes + 1024 * len(instance.app_state)

    def app_state(self, name: str) -> dict[str, str]:
        return dict(self._get(name).app_state)

    def _get(self, name: str, error: type[Exception] = LaunchFailed) -> _FakeInstance:
        with self._lock:
            instance = self._instances.get(name)
        if instance is None:
            raise error(f"instance {name!r} does not exist")
        return instance
