"""The per-tab browser surface the session drives.

Implemented by the remote-debugging client for real browsers and by the
scripted in-process browser used in tests.
"""

from __future__ import annotations

from typing import Protocol

from webenv.obs.types import RawDomSnapshot
from webenv.quiescence import NetworkEvent


class PageOperationError(RuntimeError):
    """A primitive failed against the live page (missing option, detached node)."""


class NavigationError(RuntimeError):
    pass


class PageBackend(Protocol):
    def ensure_instrumented(self) -> None:
        """Install request interception, hover marking, and the collector."""
        ...

    def navigate(self, url: str) -> None: ...

    def history_back(self) -> None: ...

    def history_forward(self) -> None: ...

    def reload(self) -> None: ...

    def current_url(self) -> str: ...

    def snapshot(self) -> RawDomSnapshot: ...

    def apply_semantic_ids(self, mapping: dict[str, int], clickable_ids: set[str]) -> None:
        """Write assigned ids (and data-clickable marks) back onto live nodes."""
        ...

    def drain_events(self) -> list[NetworkEvent]:
        """Request start/end events observed since the last drain; epoch-second timestamps."""
        ...

    def has_element(self, semantic_id: str) -> bool: ...

    def scroll_into_view(self, semantic_id: str) -> None: ...

    def click(self, semantic_id: str) -> None: ...

    def hover(self, semantic_id: str) -> None: ...

    def press_key(self, key: str, semantic_id: str | None) -> None: ...

    def set_text(self, semantic_id: str, text: str) -> None: ...

    def clear_text(self, semantic_id: str) -> None: ...

    def select_option(self, semantic_id: str, option_id: str) -> None: ...

    def settle_frames(self) -> None:
        """Block until two animation frames pass with no pending navigation."""
        ...

    def close(self) -> None: ...


class BrowserBackend(Protocol):
    def new_page(self, url: str | None = None) -> PageBackend: ...

    def close(self) -> None: ...
