"""Operator command line: parse snapshots, drive the fleet, serve episodes.

Exit codes: 0 ok, 2 input error, 3 environment error, 4 runtime/transport error.
Precedence: config file < flags < environment variables.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import signal
import sys
import threading

from webenv.fleet import (
    FakeRuntime,
    FleetConfig,
    FleetError,
    FleetManager,
    ImageRef,
    IncusRestClient,
    SnapshotRef,
    default_runtime_socket,
)
from webenv.fleet.incus import RUNTIME_SOCKET_ENV
from webenv.obs import MalformedSnapshot, compile_observation, RawDomSnapshot

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ENVIRONMENT = 3
EXIT_RUNTIME = 4

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="webenv", description=__doc__)
    parser.add_argument("--log-level", default="warning", help="logging level (debug/info/warning/error)")
    commands = parser.add_subparsers(dest="command", required=True)

    parse_cmd = commands.add_parser("parse", help="compile a raw DOM snapshot into an observation")
    parse_cmd.add_argument("snapshot", help="path to a raw-dom/1 JSON file")
    parse_cmd.add_argument("--pretty", action="store_true", help="indent the output")
    parse_cmd.add_argument("--json", action="store_true", help="machine output (default for this command)")

    fleet_cmd = commands.add_parser("fleet", help="container fleet operations")
    fleet_cmd.add_argument("--fake-runtime", action="store_true", help="use the in-process fake runtime")
    fleet_cmd.add_argument("--config", help="fleet config file (TOML or JSON)")
    fleet_cmd.add_argument("--socket", help="runtime control socket path")
    fleet_sub = fleet_cmd.add_subparsers(dest="fleet_command", required=True)

    launch = fleet_sub.add_parser("launch", help="launch a container from an image")
    launch.add_argument("image", help="OCI image name")
    launch.add_argument("--role", default="web-server")
    launch.add_argument("--json", action="store_true")

    clone = fleet_sub.add_parser("clone", help="clone a container or snapshot")
    clone.add_argument("container", help="source container id")
    clone.add_argument("--snapshot", help="snapshot name on the source container")
    clone.add_argument("--json", action="store_true")

    snapshot = fleet_sub.add_parser("snapshot", help="snapshot a running container")
    snapshot.add_argument("container")
    snapshot.add_argument("name")
    snapshot.add_argument("--json", action="store_true")

    reset = fleet_sub.add_parser("reset", help="restore a container to one of its snapshots")
    reset.add_argument("container")
    reset.add_argument("name")
    reset.add_argument("--json", action="store_true")

    destroy = fleet_sub.add_parser("destroy", help="stop and delete a container")
    destroy.add_argument("container")
    destroy.add_argument("--json", action="store_true")

    list_cmd = fleet_sub.add_parser("list", help="list containers")
    list_cmd.add_argument("--role")
    list_cmd.add_argument("--json", action="store_true")

    bench = fleet_sub.add_parser("bench", help="measure launch latency and storage")
    bench.add_argument("--image", help="OCI image name (defaults to the first config image)")
    bench.add_argument("--warmup", type=int, default=2)
    bench.add_argument("--samples", type=int, default=8)
    bench.add_argument("--json", action="store_true")

    serve = commands.add_parser("serve", help="run the episode HTTP service")
    serve.add_argument("--config", help="fleet config file")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--capacity", type=int, default=200)
    serve.add_argument("--oversight", action="store_true", help="default new episodes to oversight mode")
    serve.add_argument("--fake-runtime", action="store_true")
    serve.add_argument("--json", action="store_true")

    return parser


def _load_config(path: str | None) -> FleetConfig:
    if path is None:
        return FleetConfig()
    try:
        return FleetConfig.load(path)
    except (OSError, ValueError, KeyError) as exc:
        raise SystemExit(_fail(f"cannot read config {path}: {exc}", EXIT_INPUT))


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _make_fleet(args, config: FleetConfig) -> FleetManager:
    if args.fake_runtime:
        runtime = FakeRuntime()
        return FleetManager(runtime, port_range=config.port_range, probe_path="/health")
    socket_path = os.environ.get(RUNTIME_SOCKET_ENV) or args.socket or config.runtime_socket or default_runtime_socket()
    if socket_path is None:
        raise SystemExit(_fail("no runtime socket (set WEBENV_RUNTIME_SOCKET or use --fake-runtime)", EXIT_ENVIRONMENT))
    runtime = IncusRestClient(socket_path, storage_pool=config.storage_pool)
    if not runtime.ping():
        raise SystemExit(_fail(f"runtime at {socket_path} not responding", EXIT_ENVIRONMENT))
    return FleetManager(runtime, port_range=config.port_range, probe_path=config.probe_path)


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
        return
    for key, value in payload.items():
        print(f"{key}: {value}")


def cmd_parse(args) -> int:
    try:
        text = open(args.snapshot).read()
    except OSError as exc:
        return _fail(f"cannot read {args.snapshot}: {exc}", EXIT_INPUT)
    try:
        snapshot = RawDomSnapshot.from_json(text)
        document = compile_observation(snapshot)
    except MalformedSnapshot as exc:
        return _fail(f"malformed snapshot: {exc}", EXIT_INPUT)
    print(document.to_json(pretty=args.pretty))
    return EXIT_OK


def cmd_fleet(args) -> int:
    config = _load_config(args.config)
    fleet = _make_fleet(args, config)
    runtime = fleet.runtime
    as_json = getattr(args, "json", False)
    try:
        if args.fleet_command == "launch":
            image = fleet.import_image(ImageRef(name=args.image))
            handle = fleet.launch(image, {"role": args.role})
            _emit(handle.to_dict(), as_json)
        elif args.fleet_command == "clone":
            if not runtime.instance_exists(args.container):
                return _fail(f"no container {args.container}", EXIT_INPUT)
            if args.snapshot:
                origin = SnapshotRef(name=args.snapshot, parent_id=args.container)
                handle = fleet.launch(origin, {})
            else:
                handle = fleet.launch(_adopt(fleet, args.container), {})
            _emit(handle.to_dict(), as_json)
        elif args.fleet_command == "snapshot":
            runtime.snapshot_instance(args.container, args.name)
            _emit({"container": args.container, "snapshot": args.name}, as_json)
        elif args.fleet_command == "reset":
            if not runtime.has_snapshot(args.container, args.name):
                return _fail(f"{args.name!r} is not a snapshot of {args.container}", EXIT_INPUT)
            runtime.restore_snapshot(args.container, args.name)
            _emit({"container": args.container, "restored": args.name}, as_json)
        elif args.fleet_command == "destroy":
            try:
                runtime.stop_instance(args.container)
            except FleetError:
                pass
            runtime.delete_instance(args.container)
            _emit({"destroyed": args.container}, as_json)
        elif args.fleet_command == "list":
            handles = fleet.list(role=args.role)
            if as_json:
                print(json.dumps([h.to_dict() for h in handles], sort_keys=True))
            else:
                for handle in handles:
                    print(f"{handle.id}  {handle.state.value:9s}  {handle.endpoint or '-'}  {handle.labels}")
        elif args.fleet_command == "bench":
            return _bench(args, fleet, config, as_json)
    except FleetError as exc:
        return _fail(str(exc), EXIT_RUNTIME)
    return EXIT_OK


def _adopt(fleet: FleetManager, container_id: str):
    # A container launched by an earlier process: reconstruct a minimal handle.
    from webenv.fleet.types import ContainerHandle, ContainerState

    handle = fleet.get(container_id)
    if handle is not None:
        return handle
    return ContainerHandle(id=container_id, origin="adopted", state=ContainerState.RUNNING)


def _bench(args, fleet: FleetManager, config: FleetConfig, as_json: bool) -> int:
    image_name = args.image or (config.images[0].name if config.images else None)
    if image_name is None:
        return _fail("no image given (use --image or list one in the config)", EXIT_INPUT)
    image = fleet.import_image(ImageRef(name=image_name))
    base = fleet.launch(image, {"role": "bench-base"})
    try:
        snapshot = fleet.snapshot(base, "bench-clean")
        cold = fleet.measure_launch(image, n=args.samples, warmup=args.warmup)
        warm = fleet.measure_launch(snapshot, n=args.samples, warmup=args.warmup)
    finally:
        fleet.destroy(base)
    report = {
        "image": image_name,
        "samples": args.samples,
        "cold_launch": cold.to_dict(),
        "snapshot_launch": warm.to_dict(),
        "speedup": cold.latency_mean / warm.latency_mean if warm.latency_mean else None,
    }
    if as_json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"image: {image_name}")
        print(f"cold launch:     mean {cold.latency_mean * 1000:8.1f} ms  stddev {cold.latency_stddev * 1000:6.1f} ms")
        print(f"snapshot launch: mean {warm.latency_mean * 1000:8.1f} ms  stddev {warm.latency_stddev * 1000:6.1f} ms")
        print(f"storage per clone: {warm.storage_delta_mean / 2**20:.2f} MiB")
        print(f"speedup: {report['speedup']:.1f}x")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from webenv.driver import BROWSER_ENDPOINT_ENV, CdpBrowser, FakeBrowser, SessionConfig
    from webenv.service import EpisodeManager, create_app

    config = _load_config(args.config)
    fleet = _make_fleet(args, config)

    endpoint = os.environ.get(BROWSER_ENDPOINT_ENV)
    if endpoint:
        def browser_factory():
            return CdpBrowser(endpoint, SessionConfig())
    else:
        logger.warning("no %s set: using the scripted fake browser", BROWSER_ENDPOINT_ENV)

        def browser_factory():
            return FakeBrowser()

    manager = EpisodeManager(
        fleet, browser_factory=browser_factory, capacity=args.capacity, default_oversight=args.oversight
    )

    bases = []
    if args.fake_runtime and not config.images:
        config.images = [ImageRef(name="demo/store:latest")]
    try:
        for i, image_ref in enumerate(config.images):
            image = fleet.import_image(image_ref)
            base = fleet.launch(image, {"role": "base"})
            bases.append(base)
            name = f"base-{i}" if i else "base"
            manager.register_snapshot(name, fleet.snapshot(base, name))
    except FleetError as exc:
        for base in bases:
            fleet.destroy(base)
        return _fail(f"cannot provision base containers: {exc}", EXIT_RUNTIME)

    import socket as socket_mod

    try:
        sock = socket_mod.socket(socket_mod.AF_INET, socket_mod.SOCK_STREAM)
        sock.setsockopt(socket_mod.SOL_SOCKET, socket_mod.SO_REUSEADDR, 1)
        sock.bind((args.host, args.port))
    except OSError as exc:
        manager.close_all()
        for base in bases:
            fleet.destroy(base)
        return _fail(f"cannot bind {args.host}:{args.port}: {exc}", EXIT_ENVIRONMENT)

    app = create_app(manager)
    server_config = uvicorn.Config(app, host=args.host, port=args.port, log_level=args.log_level)
    server = uvicorn.Server(server_config)

    def shutdown(*_sig):
        server.should_exit = True

    signal.signal(signal.SIGTERM, shutdown)
    try:
        server.run(sockets=[sock])
    except SystemExit:
        pass
    finally:
        # Graceful teardown keeps the resource-balance invariant: no episode
        # containers survive the service.
        manager.close_all()
        for base in bases:
            fleet.destroy(base)
        sock.close()
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper())
    if args.command == "parse":
        return cmd_parse(args)
    if args.command == "fleet":
        return cmd_fleet(args)
    if args.command == "serve":
        return cmd_serve(args)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
