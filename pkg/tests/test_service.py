"""Episode service: isolation, oversight, reset determinism, HTTP surface."""

from __future__ import annotations

import threading
import time

import httpx
import uvicorn
import pytest
from fastapi.testclient import TestClient

from webenv.actions import ClickElement, Refresh, Terminate, TypeText
from webenv.driver import FakeBrowser, SessionConfig
from webenv.fleet import FakeRuntime, FakeRuntimeConfig, FleetManager, ImageRef
from webenv.service import (
    ActionRejected,
    ApprovalPending,
    CapacityExhausted,
    EpisodeConfig,
    EpisodeManager,
    EpisodeNotActive,
    EpisodeNotFound,
    NoPendingAction,
    PendingApproval,
    ProvisionFailed,
    TrajectoryRecord,
    UnknownSnapshot,
    create_app,
    observation_digest,
)


def fast_session() -> SessionConfig:
    return SessionConfig(idle_window=0.05, timeout=2.0)


@pytest.fixture
def harness():
    runtime = FakeRuntime(FakeRuntimeConfig(cold_launch_s=0.005, clone_launch_s=0.001, snapshot_s=0.0, restore_s=0.0))
    fleet = FleetManager(runtime, port_range=(12000, 12399))
    base = fleet.launch(fleet.import_image(ImageRef(name="fixture/shop:latest")), {"role": "base"})
    snapshot = fleet.snapshot(base, "clean")
    manager = EpisodeManager(fleet, browser_factory=FakeBrowser, capacity=20)
    manager.register_snapshot("clean", snapshot)
    baseline = fleet.live_count()
    yield manager, fleet, baseline
    manager.close_all()
    for handle in fleet.list():
        fleet.destroy(handle)


def episode_config(**overrides) -> EpisodeConfig:
    defaults = dict(task_id="task-1", snapshot="clean", session=fast_session())
    defaults.update(overrides)
    return EpisodeConfig(**defaults)


def mutate_server(endpoint: str, key: str, value: str) -> None:
    httpx.get(f"http://{endpoint}/set", params={"key": key, "value": value}, timeout=5.0)


class TestCreate:
    def test_create_gives_active_episode_with_observation(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        assert episode.status == "active"
        assert episode.step_count == 0
        first = episode.trajectory.entries[0].observation
        assert first.page_title == "Demo store"
        assert "save-marker" in first.clickable_ids()

    def test_unknown_snapshot(self, harness):
        manager, fleet, baseline = harness
        with pytest.raises(UnknownSnapshot):
            manager.create_episode(episode_config(snapshot="ghost"))
        assert fleet.live_count() == baseline

    def test_provision_failure_leaks_nothing(self, harness):
        manager, fleet, baseline = harness
        with pytest.raises(ProvisionFailed):
            manager.create_episode(episode_config(start_url="http://127.0.0.1:1/"))
        assert fleet.live_count() == baseline

    def test_capacity_ceiling(self, harness):
        manager, _, _ = harness
        manager.capacity = 1
        manager.create_episode(episode_config())
        with pytest.raises(CapacityExhausted):
            manager.create_episode(episode_config())


class TestIsolation:
    def test_mutation_in_one_episode_invisible_in_the_other(self, harness):
        manager, _, _ = harness
        a = manager.create_episode(episode_config(task_id="a"))
        b = manager.create_episode(episode_config(task_id="b"))
        assert a.container.endpoint != b.container.endpoint

        mutate_server(a.container.endpoint, "cart", "widget")
        outcome_a = manager.step(a.id, Refresh())
        outcome_b = manager.step(b.id, Refresh())
        assert "cart=widget" in outcome_a.observation.stripped_html
        assert "cart=widget" not in outcome_b.observation.stripped_html

    def test_determinism_envelope_across_twin_episodes(self, harness):
        manager, _, _ = harness
        a = manager.create_episode(episode_config(task_id="a"))
        b = manager.create_episode(episode_config(task_id="b"))
        for episode in (a, b):
            manager.step(episode.id, TypeText(target="marker-key", text="color"))
            manager.step(episode.id, ClickElement(target="about-this-store"))
        digests_a = [e.digest for e in a.trajectory.entries]
        digests_b = [e.digest for e in b.trajectory.entries]
        assert digests_a == digests_b


class TestStepping:
    def test_step_grows_trajectory(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        outcome = manager.step(episode.id, ClickElement(target="about-this-store"))
        assert outcome.ok
        assert outcome.observation.page_title == "About"
        assert len(episode.trajectory.entries) == 2
        assert episode.step_count == 1

    def test_validation_error_passthrough(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        with pytest.raises(ActionRejected) as exc:
            manager.step(episode.id, ClickElement(target="no-such-button"))
        assert exc.value.error.code == "UnknownTarget"
        assert len(episode.trajectory.entries) == 1  # nothing recorded

    def test_step_budget_exhaustion(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config(max_steps=2))
        manager.step(episode.id, Refresh())
        manager.step(episode.id, Refresh())
        assert episode.status == "failed"
        with pytest.raises(EpisodeNotActive):
            manager.step(episode.id, Refresh())

    def test_terminate_flips_status_and_records_answer(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        outcome = manager.step(episode.id, Terminate(answer="blue mug"))
        assert outcome.ok
        assert episode.status == "terminated"
        assert episode.answer == "blue mug"
        assert episode.trajectory.status == "terminated"

    def test_concurrent_steps_serialize(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        errors: list[Exception] = []

        def step_once():
            try:
                manager.step(episode.id, Refresh())
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=step_once) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert episode.step_count == 4
        indexes = [e.index for e in episode.trajectory.entries]
        assert indexes == list(range(5))


class TestOversight:
    def test_step_parks_action_until_approved(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config(oversight=True))
        result = manager.step(episode.id, ClickElement(target="about-this-store"))
        assert isinstance(result, PendingApproval)
        assert episode.pending_action is not None
        with pytest.raises(ApprovalPending):
            manager.step(episode.id, Refresh())
        outcome = manager.approve_pending(episode.id, "approve")
        assert outcome.ok
        assert episode.pending_action is None
        assert episode.trajectory.entries[-1].verdict == "approved"

    def test_approved_outcome_equals_non_oversight_twin(self, harness):
        manager, _, _ = harness
        supervised = manager.create_episode(episode_config(oversight=True))
        free = manager.create_episode(episode_config())
        action = ClickElement(target="about-this-store")
        manager.step(supervised.id, action)
        outcome_supervised = manager.approve_pending(supervised.id, "approve")
        outcome_free = manager.step(free.id, action)
        assert observation_digest(outcome_supervised.observation) == observation_digest(outcome_free.observation)

    def test_reject_leaves_observation_unchanged(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config(oversight=True))
        before = episode.trajectory.entries[-1].digest
        manager.step(episode.id, ClickElement(target="about-this-store"))
        outcome = manager.approve_pending(episode.id, "reject")
        assert outcome.status == "rejected"
        entry = episode.trajectory.entries[-1]
        assert entry.verdict == "rejected"
        assert entry.digest == before
        assert episode.step_count == 0

    def test_approve_without_pending(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config(oversight=True))
        with pytest.raises(NoPendingAction):
            manager.approve_pending(episode.id, "approve")


class TestReset:
    def test_reset_restores_initial_digest(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        original = episode.trajectory.entries[0].digest
        mutate_server(episode.container.endpoint, "cart", "full")
        for _ in range(3):
            manager.step(episode.id, Refresh())
        assert episode.trajectory.entries[-1].digest != original
        observation = manager.reset_episode(episode.id)
        assert observation_digest(observation) == original
        assert episode.step_count == 0
        assert len(episode.archived) == 1

    def test_reset_terminated_episode_starts_new_epoch(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        manager.step(episode.id, Terminate())
        manager.reset_episode(episode.id)
        assert episode.status == "active"

    def test_reset_unknown_episode(self, harness):
        manager, _, _ = harness
        with pytest.raises(EpisodeNotFound):
            manager.reset_episode("ep-nope")

    def test_endpoint_preserved_across_reset(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        endpoint = episode.container.endpoint
        manager.reset_episode(episode.id)
        assert episode.container.endpoint == endpoint


class TestTrajectoryAndClose:
    def test_entries_count_and_round_trip(self, harness):
        manager, _, _ = harness
        episode = manager.create_episode(episode_config())
        for _ in range(3):
            manager.step(episode.id, Refresh())
        record = manager.get_trajectory(episode.id)
        assert len(record.entries) == 4  # initial + 3 steps
        exported = record.to_jsonl()
        assert TrajectoryRecord.from_jsonl(exported).to_jsonl() == exported

    def test_close_is_idempotent_and_balances_resources(self, harness):
        manager, fleet, baseline = harness
        a = manager.create_episode(episode_config())
        b = manager.create_episode(episode_config())
        manager.close_episode(a.id)
        manager.close_episode(a.id)
        manager.close_episode(b.id)
        assert fleet.live_count() == baseline


class TestHttpApi:
    @pytest.fixture
    def client(self, harness):
        manager, _, _ = harness
        with TestClient(create_app(manager)) as client:
            yield client

    def create(self, client, **overrides) -> str:
        body = {"task_id": "t", "snapshot": "clean", "idle_window": 0.05, "timeout": 2.0}
        body.update(overrides)
        response = client.post("/episodes", json=body)
        assert response.status_code == 200, response.text
        return response.json()["episode_id"]

    def test_create_and_step(self, client):
        episode_id = self.create(client)
        response = client.post(
            f"/episodes/{episode_id}/step",
            content='{"action":"click","target":"about-this-store"}',
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["result"] == "ok"
        assert payload["outcome"]["observation"]["title"] == "About"

    def test_error_envelope(self, client):
        response = client.post("/episodes/ep-missing/step", content='{"action":"refresh"}')
        assert response.status_code == 404
        assert set(response.json().keys()) == {"code", "message"}

    def test_validation_error_envelope(self, client):
        episode_id = self.create(client)
        response = client.post(f"/episodes/{episode_id}/step", content='{"action":"click","target":"ghost"}')
        assert response.status_code == 422
        assert response.json()["code"] == "UnknownTarget"

    def test_unknown_action_envelope(self, client):
        episode_id = self.create(client)
        response = client.post(f"/episodes/{episode_id}/step", content='{"action":"fly"}')
        assert response.status_code == 422
        assert response.json()["code"] == "UnknownAction"

    def test_approval_flow_over_http(self, client):
        episode_id = self.create(client, oversight=True)
        response = client.post(
            f"/episodes/{episode_id}/step",
            content='{"action":"click","target":"about-this-store"}',
        )
        assert response.json()["result"] == "awaiting_approval"
        response = client.post(f"/episodes/{episode_id}/approval", json={"verdict": "approve"})
        assert response.json()["result"] == "ok"

    def test_reset_and_trajectory_endpoints(self, client):
        episode_id = self.create(client)
        client.post(f"/episodes/{episode_id}/step", content='{"action":"refresh"}')
        response = client.post(f"/episodes/{episode_id}/reset")
        assert response.status_code == 200
        response = client.get(f"/episodes/{episode_id}/trajectory")
        assert response.status_code == 200
        record = TrajectoryRecord.from_jsonl(response.text)
        assert record.entries[0].status == "initial"

    def test_delete_then_conflict(self, client):
        episode_id = self.create(client)
        assert client.delete(f"/episodes/{episode_id}").status_code == 204
        assert client.delete(f"/episodes/{episode_id}").status_code == 204
        response = client.post(f"/episodes/{episode_id}/step", content='{"action":"refresh"}')
        assert response.status_code == 409

class TestEventStream:
    @pytest.fixture
    def live_server(self, harness):
        manager, _, _ = harness
        config = uvicorn.Config(create_app(manager), host="127.0.0.1", port=0, log_level="warning")
        server = uvicorn.Server(config)
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        deadline = time.monotonic() + 10
        while not server.started:
            if time.monotonic() > deadline:
                pytest.fail("uvicorn did not start")
            time.sleep(0.01)
        port = server.servers[0].sockets[0].getsockname()[1]
        yield manager, f"http://127.0.0.1:{port}"
        server.should_exit = True
        thread.join(timeout=5)

    def test_event_stream_announces_pending_action(self, live_server):
        manager, base_url = live_server
        response = httpx.post(
            f"{base_url}/episodes",
            json={"task_id": "t", "snapshot": "clean", "oversight": True, "idle_window": 0.05, "timeout": 2.0},
            timeout=10.0,
        )
        episode_id = response.json()["episode_id"]

        def trigger():
            httpx.post(
                f"{base_url}/episodes/{episode_id}/step",
                content='{"action":"click","target":"about-this-store"}',
                timeout=10.0,
            )

        timer = threading.Timer(0.3, trigger)
        timer.start()
        events = []
        with httpx.stream("GET", f"{base_url}/episodes/{episode_id}/events", timeout=10.0) as stream:
            for line in stream.iter_lines():
                events.append(line)
                if line.startswith("event: pending_action"):
                    break
        timer.join()
        assert any(line.startswith("event: pending_action") for line in events)
        # approve over HTTP so the parked action completes
        response = httpx.post(f"{base_url}/episodes/{episode_id}/approval", json={"verdict": "approve"}, timeout=10.0)
        assert response.json()["result"] == "ok"
