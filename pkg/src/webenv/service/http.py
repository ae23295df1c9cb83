"""HTTP API over the episode manager, including the oversight event stream."""

from __future__ import annotations

import json
import queue
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse, StreamingResponse
from pydantic import BaseModel, Field

from webenv.actions import ActionParseError, parse_action, serialize_action
from webenv.driver.session import SessionConfig, StepOutcome
from webenv.service.episodes import (
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
    ServiceError,
    UnknownSnapshot,
)

SSE_POLL_S = 0.5

_STATUS_BY_ERROR = {
    EpisodeNotFound: 404,
    UnknownSnapshot: 404,
    EpisodeNotActive: 409,
    ApprovalPending: 409,
    NoPendingAction: 409,
    CapacityExhausted: 429,
    ActionRejected: 422,
    ProvisionFailed: 502,
}


class CreateEpisodeBody(BaseModel):
    task_id: str
    snapshot: str
    start_url: str = "http://{endpoint}/"
    oversight: bool | None = None
    max_steps: int = Field(default=50, ge=1)
    idle_window: float | None = None
    timeout: float | None = None
    long_request_threshold: float | None = None
    max_retries: int | None = None


class ApprovalBody(BaseModel):
    verdict: str  # approve | reject


def _error_response(exc: ServiceError) -> JSONResponse:
    status = _STATUS_BY_ERROR.get(type(exc), 500)
    body: dict[str, Any] = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, ActionRejected):
        body["code"] = exc.error.code
        if exc.error.target is not None:
            body["target"] = exc.error.target
    return JSONResponse(status_code=status, content=body)


def _session_config(body: CreateEpisodeBody) -> SessionConfig:
    config = SessionConfig()
    if body.idle_window is not None:
        config.idle_window = body.idle_window
    if body.timeout is not None:
        config.timeout = body.timeout
    if body.long_request_threshold is not None:
        config.long_request_threshold = body.long_request_threshold
    if body.max_retries is not None:
        config.max_retries = body.max_retries
    return config


def _outcome_payload(result: StepOutcome | PendingApproval) -> dict[str, Any]:
    if isinstance(result, PendingApproval):
        return {"result": "awaiting_approval", "action": serialize_action(result.action)}
    return {"result": "ok" if result.ok else "error", "outcome": result.to_dict()}


def create_app(manager: EpisodeManager) -> FastAPI:
    app = FastAPI(title="webenv episode service")
    app.state.manager = manager

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request: Request, exc: ServiceError):
        return _error_response(exc)

    @app.post("/episodes")
    def create_episode(body: CreateEpisodeBody):
        episode = manager.create_episode(
            EpisodeConfig(
                task_id=body.task_id,
                snapshot=body.snapshot,
                start_url=body.start_url,
                oversight=manager.default_oversight if body.oversight is None else body.oversight,
                max_steps=body.max_steps,
                session=_session_config(body),
            )
        )
        return {
            "episode_id": episode.id,
            "status": episode.status,
            "observation": episode.trajectory.entries[0].observation.to_dict(),
        }

    @app.get("/episodes")
    def list_episodes():
        return {"episodes": [e.snapshot_status() for e in manager.episodes.values()]}

    @app.get("/episodes/{episode_id}")
    def get_episode(episode_id: str):
        return manager.get(episode_id).snapshot_status()

    @app.post("/episodes/{episode_id}/step")
    async def step(episode_id: str, request: Request):
        raw = await request.body()
        try:
            action = parse_action(raw.decode())
        except ActionParseError as exc:
            return JSONResponse(status_code=422, content={"code": exc.error.code, "message": exc.error.message})
        result = manager.step(episode_id, action)
        return _outcome_payload(result)

    @app.post("/episodes/{episode_id}/approval")
    def approval(episode_id: str, body: ApprovalBody):
        result = manager.approve_pending(episode_id, body.verdict)
        return _outcome_payload(result)

    @app.post("/episodes/{episode_id}/reset")
    def reset(episode_id: str):
        observation = manager.reset_episode(episode_id)
        return {"episode_id": episode_id, "observation": observation.to_dict()}

    @app.get("/episodes/{episode_id}/trajectory")
    def trajectory(episode_id: str):
        record = manager.get_trajectory(episode_id)
        return PlainTextResponse(record.to_jsonl(), media_type="application/x-ndjson")

    @app.delete("/episodes/{episode_id}")
    def close(episode_id: str):
        manager.close_episode(episode_id)
        return Response(status_code=204)

    @app.get("/episodes/{episode_id}/events")
    def events(episode_id: str):
        episode = manager.get(episode_id)
        subscription = episode.subscribe()

        def stream():
            try:
                yield ": connected\n\n"
                while True:
                    try:
                        event = subscription.get(timeout=SSE_POLL_S)
                    except queue.Empty:
                        yield ": ping\n\n"
                        continue
                    payload = json.dumps(event["data"], sort_keys=True)
                    yield f"event: {event['type']}\ndata: {payload}\n\n"
                    if event["type"] == "closed":
                        return
            finally:
                episode.unsubscribe(subscription)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
