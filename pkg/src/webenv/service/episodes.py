"""Episode orchestration: one cloned server container + one browser session each."""

from __future__ import annotations

import logging
import queue
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any, Callable

from webenv.actions import (
    ActionRequest,
    ActionValidationError,
    Navigate,
    Terminate,
    serialize_action,
    validate_action,
)
from webenv.driver.page import BrowserBackend
from webenv.driver.session import BrowserSession, SessionConfig, StepOutcome
from webenv.fleet.manager import FleetManager
from webenv.fleet.types import ContainerHandle, SnapshotRef
from webenv.obs.types import ObservationDocument
from webenv.service.trajectory import TrajectoryRecord

logger = logging.getLogger(__name__)

DEFAULT_CAPACITY = 200
EPOCH_SNAPSHOT = "episode-epoch"


class ServiceError(RuntimeError):
    code = "ServiceError"


class EpisodeNotFound(ServiceError):
    code = "EpisodeNotFound"


class EpisodeNotActive(ServiceError):
    code = "EpisodeNotActive"


class CapacityExhausted(ServiceError):
    code = "CapacityExhausted"


class ProvisionFailed(ServiceError):
    code = "ProvisionFailed"


class NoPendingAction(ServiceError):
    code = "NoPendingAction"


class ApprovalPending(ServiceError):
    code = "ApprovalPending"


class UnknownSnapshot(ServiceError):
    code = "UnknownSnapshot"


class ActionRejected(ServiceError):
    code = "ActionRejected"

    def __init__(self, error: ActionValidationError):
        super().__init__(error.message)
        self.error = error


@dataclass
class EpisodeConfig:
    task_id: str
    snapshot: str  # name in the manager's snapshot registry
    start_url: str = "http://{endpoint}/"
    oversight: bool = False
    max_steps: int = 50
    session: SessionConfig = field(default_factory=SessionConfig)

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


@dataclass
class PendingApproval:
    """Returned by step() in oversight mode: the action awaits a verdict."""

    action: ActionRequest


StepResult = StepOutcome | PendingApproval


class Episode:
    def __init__(self, episode_id: str, config: EpisodeConfig, container: ContainerHandle,
                 epoch: SnapshotRef, session: BrowserSession):
        self.id = episode_id
        self.config = config
        self.container = container
        self.epoch = epoch
        self.session = session
        self.step_count = 0
        self.status = "active"  # active | terminated | failed | closed
        self.answer: str | None = None
        self.failure_reason: str | None = None
        self.pending_action: ActionRequest | None = None
        self.trajectory = TrajectoryRecord(episode_id=episode_id, task_id=config.task_id)
        self.archived: list[TrajectoryRecord] = []
        self.lock = threading.Lock()
        self._subscribers: list[queue.Queue] = []

    # -- events ------------------------------------------------------------------

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        if q in self._subscribers:
            self._subscribers.remove(q)

    def emit(self, event_type: str, data: dict[str, Any]) -> None:
        for q in list(self._subscribers):
            q.put({"type": event_type, "data": data})

    def snapshot_status(self) -> dict[str, Any]:
        return {
            "episode_id": self.id,
            "status": self.status,
            "step_count": self.step_count,
            "oversight": self.config.oversight,
            "pending": self.pending_action is not None,
            "answer": self.answer,
        }


class EpisodeManager:
    """Owns all episodes; per-episode operations serialize on the episode lock."""

    def __init__(
        self,
        fleet: FleetManager,
        browser_factory: Callable[[], BrowserBackend],
        capacity: int = DEFAULT_CAPACITY,
        default_oversight: bool = False,
    ):
        self.fleet = fleet
        self.browser_factory = browser_factory
        self.capacity = capacity
        self.default_oversight = default_oversight
        self.episodes: dict[str, Episode] = {}
        self.snapshots: dict[str, SnapshotRef] = {}
        self._lock = threading.Lock()

    def register_snapshot(self, name: str, ref: SnapshotRef) -> None:
        self.snapshots[name] = ref

    # -- lifecycle ------------------------------------------------------------------

    def create_episode(self, config: EpisodeConfig) -> Episode:
        source = self.snapshots.get(config.snapshot)
        if source is None:
            raise UnknownSnapshot(f"no registered snapshot {config.snapshot!r}")
        with self._lock:
            active = sum(1 for e in self.episodes.values() if e.status != "closed")
            if active >= self.capacity:
                raise CapacityExhausted(f"{active} episodes at capacity {self.capacity}")

        container: ContainerHandle | None = None
        session: BrowserSession | None = None
        try:
            container = self.fleet.launch(source, {"role": "web-server"})
            epoch = self.fleet.snapshot(container, EPOCH_SNAPSHOT)
            session = BrowserSession(self.browser_factory(), config.session)
            episode = Episode(f"ep-{uuid.uuid4().hex[:10]}", config, container, epoch, session)
            self._start_epoch(episode)
        except ServiceError:
            self._rollback(container, session)
            raise
        except Exception as exc:
            self._rollback(container, session)
            raise ProvisionFailed(str(exc)) from exc
        with self._lock:
            self.episodes[episode.id] = episode
        return episode

    def _start_epoch(self, episode: Episode) -> None:
        url = episode.config.start_url.format(endpoint=episode.container.endpoint)
        outcome = episode.session.execute(Navigate(url=url))
        if outcome.status == "NavigationFailed" or outcome.observation is None:
            raise ProvisionFailed(f"start url {url}: {outcome.error_detail or outcome.status}")
        episode.trajectory.append(status="initial", observation=outcome.observation)

    def _rollback(self, container: ContainerHandle | None, session: BrowserSession | None) -> None:
        if session is not None:
            try:
                session.close()
            except Exception:
                logger.debug("session rollback failed", exc_info=True)
        if container is not None:
            try:
                self.fleet.destroy(container)
            except Exception:
                logger.debug("container rollback failed", exc_info=True)

    def get(self, episode_id: str) -> Episode:
        episode = self.episodes.get(episode_id)
        if episode is None:
            raise EpisodeNotFound(episode_id)
        return episode

    # -- stepping ---------------------------------------------------------------------

    def step(self, episode_id: str, action: ActionRequest) -> StepResult:
        episode = self.get(episode_id)
        with episode.lock:
            self._require_active(episode)
            if episode.pending_action is not None:
                raise ApprovalPending("an action is already awaiting approval")
            if episode.step_count >= episode.config.max_steps:
                episode.status = "failed"
                episode.failure_reason = "step budget exhausted"
                raise EpisodeNotActive("step budget exhausted")
            observation = episode.session.last_observation
            assert observation is not None
            error = validate_action(action, observation, episode.session.tab_count)
            if error is not None:
                raise ActionRejected(error)
            if episode.config.oversight:
                episode.pending_action = action
                episode.emit("pending_action", {"action": serialize_action(action)})
                return PendingApproval(action=action)
            return self._execute_and_record(episode, action, verdict=None)

    def approve_pending(self, episode_id: str, verdict: str) -> StepResult:
        episode = self.get(episode_id)
        with episode.lock:
            if episode.pending_action is None:
                raise NoPendingAction(episode_id)
            action = episode.pending_action
            episode.pending_action = None
            if verdict == "approve":
                result = self._execute_and_record(episode, action, verdict="approved")
                episode.emit("approval", {"verdict": "approved"})
                return result
            if verdict == "reject":
                observation = episode.session.last_observation
                assert observation is not None
                episode.trajectory.append(
                    status="rejected", observation=observation, action=action, verdict="rejected"
                )
                episode.emit("approval", {"verdict": "rejected"})
                episode.emit("step", {"status": "rejected", "index": len(episode.trajectory.entries) - 1})
                return StepOutcome(status="rejected", observation=observation)
            raise ActionRejected(ActionValidationError("BadParameter", f"unknown verdict {verdict!r}"))

    def _execute_and_record(self, episode: Episode, action: ActionRequest, verdict: str | None) -> StepOutcome:
        outcome = episode.session.execute(action)
        episode.step_count += 1
        observation = outcome.observation or episode.session.last_observation
        assert observation is not None
        episode.trajectory.append(
            status=outcome.status,
            observation=observation,
            action=action,
            timing={
                "action_latency_s": outcome.timing.action_latency,
                "quiescence_wait_s": outcome.timing.quiescence_wait,
            },
            verdict=verdict,
        )
        if isinstance(action, Terminate):
            episode.status = "terminated"
            episode.answer = outcome.answer
            episode.trajectory.status = "terminated"
            episode.trajectory.answer = outcome.answer
        elif episode.step_count >= episode.config.max_steps:
            episode.status = "failed"
            episode.failure_reason = "step budget exhausted"
            episode.trajectory.status = "failed"
        episode.emit("step", {"status": outcome.status, "index": len(episode.trajectory.entries) - 1})
        return outcome

    def _require_active(self, episode: Episode) -> None:
        if episode.status != "active":
            raise EpisodeNotActive(f"episode is {episode.status}" + (
                f": {episode.failure_reason}" if episode.failure_reason else ""))

    # -- reset / close -----------------------------------------------------------------

    def reset_episode(self, episode_id: str) -> ObservationDocument:
        episode = self.get(episode_id)
        with episode.lock:
            if episode.status == "closed":
                raise EpisodeNotActive("episode is closed")
            self.fleet.reset(episode.container, episode.epoch)
            episode.session.close()
            episode.session = BrowserSession(self.browser_factory(), episode.config.session)
            episode.archived.append(episode.trajectory)
            episode.trajectory = TrajectoryRecord(episode_id=episode.id, task_id=episode.config.task_id)
            episode.step_count = 0
            episode.status = "active"
            episode.answer = None
            episode.failure_reason = None
            episode.pending_action = None
            self._start_epoch(episode)
            episode.emit("reset", {"episode_id": episode.id})
            return episode.trajectory.entries[0].observation

    def get_trajectory(self, episode_id: str) -> TrajectoryRecord:
        return self.get(episode_id).trajectory

    def close_episode(self, episode_id: str) -> None:
        episode = self.get(episode_id)
        with episode.lock:
            if episode.status == "closed":
                return
            episode.session.close()
            self.fleet.destroy(episode.container)
            episode.status = "closed"
            if episode.trajectory.status == "active":
                episode.trajectory.status = "closed"
            episode.pending_action = None
            episode.emit("closed", {"episode_id": episode.id})

    def close_all(self) -> None:
        for episode_id in list(self.episodes):
            try:
                self.close_episode(episode_id)
            except EpisodeNotFound:
                pass
