"""Episode service: HTTP reset/step/observe over paired browser+server episodes."""

from webenv.service.episodes import (
    ActionRejected,
    ApprovalPending,
    CapacityExhausted,
    Episode,
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
from webenv.service.http import create_app
from webenv.service.trajectory import TrajectoryEntry, TrajectoryRecord, observation_digest

__all__ = [
    "ActionRejected",
    "ApprovalPending",
    "CapacityExhausted",
    "Episode",
    "EpisodeConfig",
    "EpisodeManager",
    "EpisodeNotActive",
    "EpisodeNotFound",
    "NoPendingAction",
    "PendingApproval",
    "ProvisionFailed",
    "ServiceError",
    "TrajectoryEntry",
    "TrajectoryRecord",
    "UnknownSnapshot",
    "create_app",
    "observation_digest",
]
