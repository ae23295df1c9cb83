"""Fleet configuration file loading (TOML or JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from webenv.fleet.types import ImageRef


@dataclass
class FleetConfig:
    runtime_socket: str | None = None
    port_range: tuple[int, int] = (42000, 42999)
    probe_path: str = "/health"
    storage_pool: str = "default"
    images: list[ImageRef] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> FleetConfig:
        port_range = data.get("port_range", [42000, 42999])
        return cls(
            runtime_socket=data.get("runtime_socket"),
            port_range=(int(port_range[0]), int(port_range[1])),
            probe_path=data.get("probe_path", "/health"),
            storage_pool=data.get("storage_pool", "default"),
            images=[
                ImageRef(name=i["name"], source=i.get("source", "oci-registry"), digest=i.get("digest", ""))
                for i in data.get("images", [])
            ],
        )

    @classmethod
    def load(cls, path: str | Path) -> FleetConfig:
        path = Path(path)
        if path.suffix == ".toml":
            data = tomllib.loads(path.read_text())
        else:
            data = json.loads(path.read_text())
        return cls.from_dict(data)
