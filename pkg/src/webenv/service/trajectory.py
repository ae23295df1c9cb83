"""Episode trajectories: ordered observation/action/outcome records, JSONL wire."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from webenv.actions import ActionRequest, parse_action, serialize_action
from webenv.obs.types import ObservationDocument

TRAJECTORY_SCHEMA = "trajectory/1"


def observation_digest(observation: ObservationDocument) -> str:
    """Content digest for replay diffing.

    The url is excluded: clones of one snapshot serve identical content on
    different endpoints, and their trajectories must digest identically.
    """
    payload = observation.to_dict()
    payload.pop("url", None)
    return hashlib.sha256(json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


@dataclass
class TrajectoryEntry:
    index: int
    status: str  # "initial" | step outcome status | "rejected"
    observation: ObservationDocument
    digest: str
    action: ActionRequest | None = None
    timing: dict[str, float] | None = None
    verdict: str | None = None  # oversight approve/reject

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "status": self.status,
            "digest": self.digest,
            "observation": self.observation.to_dict(),
            "action": serialize_action(self.action) if self.action is not None else None,
            "timing": self.timing,
            "verdict": self.verdict,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TrajectoryEntry:
        return cls(
            index=int(data["index"]),
            status=data["status"],
            observation=ObservationDocument.from_dict(data["observation"]),
            digest=data["digest"],
            action=parse_action(data["action"]) if data.get("action") else None,
            timing=data.get("timing"),
            verdict=data.get("verdict"),
        )


@dataclass
class TrajectoryRecord:
    episode_id: str
    task_id: str
    status: str = "active"
    answer: str | None = None
    entries: list[TrajectoryEntry] = field(default_factory=list)

    def append(
        self,
        status: str,
        observation: ObservationDocument,
        action: ActionRequest | None = None,
        timing: dict[str, float] | None = None,
        verdict: str | None = None,
    ) -> TrajectoryEntry:
        entry = TrajectoryEntry(
            index=len(self.entries),
            status=status,
            observation=observation,
            digest=observation_digest(observation),
            action=action,
            timing=timing,
            verdict=verdict,
        )
        self.entries.append(entry)
        return entry

    def to_jsonl(self) -> str:
        header = {
            "schema": TRAJECTORY_SCHEMA,
            "episode_id": self.episode_id,
            "task_id": self.task_id,
            "status": self.status,
            "answer": self.answer,
            "entries": len(self.entries),
        }
        lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
        lines.extend(json.dumps(e.to_dict(), sort_keys=True, separators=(",", ":")) for e in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> TrajectoryRecord:
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty trajectory file")
        header = json.loads(lines[0])
        if header.get("schema") != TRAJECTORY_SCHEMA:
            raise ValueError(f"unsupported trajectory schema {header.get('schema')!r}")
        record = cls(
            episode_id=header["episode_id"],
            task_id=header.get("task_id", ""),
            status=header.get("status", "active"),
            answer=header.get("answer"),
        )
        for line in lines[1:]:
            record.entries.append(TrajectoryEntry.from_dict(json.loads(line)))
        for i, entry in enumerate(record.entries):
            if entry.index != i:
                raise ValueError(f"trajectory entries not gapless at {entry.index}")
        return record
