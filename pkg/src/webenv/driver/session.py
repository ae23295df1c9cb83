"""Browser session: observe, execute validated actions, synchronize on quiescence."""

from __future__ import annotations

import logging
import threading
import time
import uuid
from dataclasses import dataclass, field

from webenv.actions import (
    ActionRequest,
    Back,
    ClearInput,
    ClickElement,
    CloseTab,
    Forward,
    HoverElement,
    KeyPress,
    Navigate,
    NewTab,
    Refresh,
    SelectOption,
    SwitchTab,
    Terminate,
    TypeText,
)
from webenv.driver.page import BrowserBackend, NavigationError, PageBackend, PageOperationError
from webenv.obs.compiler import compile_observation_detailed
from webenv.obs.types import ObservationDocument, RawDomSnapshot
from webenv.quiescence import (
    DEFAULT_IDLE_WINDOW,
    DEFAULT_LONG_REQUEST_THRESHOLD,
    DEFAULT_TIMEOUT,
    Idle,
    NetworkActivityLedger,
    NetworkEvent,
    TimedOut,
    first_idle_instant,
)

logger = logging.getLogger(__name__)

POLL_INTERVAL_S = 0.02


class SessionClosedError(RuntimeError):
    pass


class ConnectFailed(RuntimeError):
    pass


class InjectionFailed(RuntimeError):
    pass


class SnapshotCaptureFailed(RuntimeError):
    pass


@dataclass
class SessionConfig:
    debug_endpoint: str | None = None
    viewport_width: int = 1280
    viewport_height: int = 720
    idle_window: float = DEFAULT_IDLE_WINDOW
    timeout: float = DEFAULT_TIMEOUT
    long_request_threshold: float = DEFAULT_LONG_REQUEST_THRESHOLD
    max_retries: int = 2

    def __post_init__(self) -> None:
        if min(self.idle_window, self.timeout, self.long_request_threshold) <= 0:
            raise ValueError("durations must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


@dataclass
class StepTiming:
    action_latency: float = 0.0
    quiescence_wait: float = 0.0


@dataclass
class StepOutcome:
    status: str  # "ok" | StaleElement | Timeout | NotInteractable | NavigationFailed | TabIndexOutOfRange
    observation: ObservationDocument | None = None
    error_detail: str | None = None
    timing: StepTiming = field(default_factory=StepTiming)
    answer: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "observation": self.observation.to_dict() if self.observation else None,
            "error_detail": self.error_detail,
            "timing": {
                "action_latency_s": self.timing.action_latency,
                "quiescence_wait_s": self.timing.quiescence_wait,
            },
            "answer": self.answer,
        }


@dataclass
class _Tab:
    page: PageBackend
    ledger: NetworkActivityLedger
    trace: list[NetworkEvent] = field(default_factory=list)


class BrowserSession:
    """One agent's browser. Operations on a session are serialized."""

    def __init__(self, backend: BrowserBackend, config: SessionConfig | None = None):
        self.id = f"session-{uuid.uuid4().hex[:8]}"
        self.config = config or SessionConfig()
        self._backend = backend
        self._lock = threading.RLock()
        self.closed = False
        self.answer: str | None = None
        self.last_observation: ObservationDocument | None = None
        self.last_snapshot: RawDomSnapshot | None = None
        first = backend.new_page(None)
        first.ensure_instrumented()
        self.tabs: list[_Tab] = [self._new_tab_state(first)]
        self.active_index = 0

    def _new_tab_state(self, page: PageBackend) -> _Tab:
        return _Tab(
            page=page,
            ledger=NetworkActivityLedger(
                idle_window=self.config.idle_window,
                timeout=self.config.timeout,
                long_request_threshold=self.config.long_request_threshold,
            ),
        )

    @property
    def tab_count(self) -> int:
        return len(self.tabs)

    @property
    def active_tab(self) -> _Tab:
        return self.tabs[self.active_index]

    # -- observation ----------------------------------------------------------

    def observe(self) -> ObservationDocument:
        with self._lock:
            self._require_open()
            tab = self.active_tab
            try:
                snapshot = tab.page.snapshot()
            except Exception as exc:
                raise SnapshotCaptureFailed(str(exc)) from exc
            compiled = compile_observation_detailed(snapshot)
            doc = compiled.document
            tab.page.apply_semantic_ids(compiled.capture_index_by_id, doc.clickable_ids())
            self.last_snapshot = snapshot
            self.last_observation = doc
            return doc

    # -- execution -------------------------------------------------------------

    def execute(self, action: ActionRequest) -> StepOutcome:
        with self._lock:
            self._require_open()
            if isinstance(action, Terminate):
                answer = action.answer
                observation = self.last_observation
                self.close(answer=answer)
                return StepOutcome(status="ok", observation=observation, answer=answer)

            action_time = time.time()
            t0 = time.monotonic()
            try:
                error = self._perform(action)
            except NavigationError as exc:
                return StepOutcome(status="NavigationFailed", observation=self.last_observation, error_detail=str(exc))
            except PageOperationError as exc:
                return StepOutcome(status="NotInteractable", observation=self.last_observation, error_detail=str(exc))
            if error is not None:
                return error
            if self.closed:  # closing the last tab ends the session
                return StepOutcome(status="ok", observation=self.last_observation)
            action_latency = time.monotonic() - t0

            status, wait, outstanding = self._await_quiescence(self.active_tab, action_time)
            timing = StepTiming(action_latency=action_latency, quiescence_wait=wait)
            observation = self.observe()
            if status == "timeout":
                detail = "outstanding requests: " + ", ".join(outstanding) if outstanding else "no idle window before timeout"
                return StepOutcome(status="Timeout", observation=observation, error_detail=detail, timing=timing)
            return StepOutcome(status="ok", observation=observation, timing=timing)

    def _perform(self, action: ActionRequest) -> StepOutcome | None:
        """Run the primitive; returns an error outcome or None on success."""
        tab = self.active_tab
        if isinstance(action, Navigate):
            tab.ledger.reset()
            tab.trace.clear()
            tab.page.navigate(action.url)
            return None
        if isinstance(action, Back):
            tab.ledger.reset()
            tab.trace.clear()
            tab.page.history_back()
            return None
        if isinstance(action, Forward):
            tab.ledger.reset()
            tab.trace.clear()
            tab.page.history_forward()
            return None
        if isinstance(action, Refresh):
            tab.ledger.reset()
            tab.trace.clear()
            tab.page.reload()
            return None
        if isinstance(action, NewTab):
            page = self._backend.new_page(action.url)
            page.ensure_instrumented()
            self.tabs.append(self._new_tab_state(page))
            self.active_index = len(self.tabs) - 1
            return None
        if isinstance(action, SwitchTab):
            if not 0 <= action.index < len(self.tabs):
                return StepOutcome(status="TabIndexOutOfRange", observation=self.last_observation,
                                   error_detail=f"tab {action.index} of {len(self.tabs)}")
            self.active_index = action.index
            return None
        if isinstance(action, CloseTab):
            if not 0 <= action.index < len(self.tabs):
                return StepOutcome(status="TabIndexOutOfRange", observation=self.last_observation,
                                   error_detail=f"tab {action.index} of {len(self.tabs)}")
            tab_state = self.tabs.pop(action.index)
            tab_state.page.close()
            if not self.tabs:
                self.close()
                return None
            if self.active_index >= action.index:
                self.active_index = max(0, self.active_index - 1)
            return None

        # element-targeted primitives, with stale-target retries
        target = action.target
        if isinstance(action, KeyPress) and target is None:
            tab.page.press_key(action.key, None)
            return None
        assert target is not None
        resolved = self._resolve_with_retries(tab, target)
        if not resolved:
            return StepOutcome(
                status="StaleElement",
                observation=self.last_observation,
                error_detail=f"{target!r} not found after {self.config.max_retries} retries",
            )
        tab.page.scroll_into_view(target)
        if isinstance(action, ClickElement):
            tab.page.click(target)
        elif isinstance(action, HoverElement):
            tab.page.hover(target)
        elif isinstance(action, KeyPress):
            tab.page.press_key(action.key, target)
        elif isinstance(action, TypeText):
            tab.page.set_text(target, action.text)
            if action.press_enter:
                tab.page.press_key("Enter", target)
        elif isinstance(action, ClearInput):
            tab.page.clear_text(target)
        elif isinstance(action, SelectOption):
            tab.page.select_option(target, action.option_id)
        else:  # pragma: no cover - exhaustive over the vocabulary
            raise PageOperationError(f"unsupported action {type(action).__name__}")
        return None

    def _resolve_with_retries(self, tab: _Tab, semantic_id: str) -> bool:
        """Semantic targeting survives DOM churn by re-observing before giving up."""
        for attempt in range(self.config.max_retries + 1):
            if tab.page.has_element(semantic_id):
                return True
            if attempt < self.config.max_retries:
                self.observe()
        return False

    # -- quiescence -----------------------------------------------------------------

    def _drain(self, tab: _Tab) -> None:
        for event in tab.page.drain_events():
            tab.trace.append(event)
            try:
                if event.kind == "start":
                    tab.ledger.on_request_start(event.id, event.t)
                else:
                    tab.ledger.on_request_end(event.id, event.t)
            except Exception:
                logger.debug("ledger rejected event %s", event, exc_info=True)

    def _await_quiescence(self, tab: _Tab, action_time: float) -> tuple[str, float, list[str]]:
        cfg = self.config
        start_wall = time.monotonic()
        deadline = action_time + cfg.timeout
        while True:
            self._drain(tab)
            verdict = first_idle_instant(
                tab.trace,
                idle_window=cfg.idle_window,
                timeout=cfg.timeout,
                long_request_threshold=cfg.long_request_threshold,
                action_time=action_time,
            )
            now = time.time()
            if isinstance(verdict, Idle) and verdict.at <= now:
                tab.page.settle_frames()
                return ("idle", time.monotonic() - start_wall, [])
            if now >= deadline:
                outstanding = list(verdict.outstanding) if isinstance(verdict, TimedOut) else []
                return ("timeout", time.monotonic() - start_wall, outstanding)
            time.sleep(POLL_INTERVAL_S)

    # -- lifecycle ----------------------------------------------------------------------

    def ensure_instrumented(self, tab_index: int | None = None) -> None:
        with self._lock:
            self._require_open()
            tab = self.tabs[tab_index if tab_index is not None else self.active_index]
            try:
                tab.page.ensure_instrumented()
            except Exception as exc:
                raise InjectionFailed(str(exc)) from exc

    def close(self, answer: str | None = None) -> None:
        with self._lock:
            if self.closed:
                return
            if answer is not None:
                self.answer = answer
            for tab in self.tabs:
                try:
                    tab.page.close()
                except Exception:
                    logger.debug("tab close failed", exc_info=True)
            self.tabs = []
            self.closed = True
            try:
                self._backend.close()
            except Exception:
                logger.debug("backend close failed", exc_info=True)

    def _require_open(self) -> None:
        if self.closed:
            raise SessionClosedError(self.id)


def open_session(config: SessionConfig | None = None, backend: BrowserBackend | None = None) -> BrowserSession:
    """Connect to a browser (remote-debugging endpoint unless a backend is given)."""
    config = config or SessionConfig()
    if backend is None:
        from webenv.driver.cdp import CdpBrowser, resolve_debug_endpoint

        endpoint = resolve_debug_endpoint(config.debug_endpoint)
        if endpoint is None:
            raise ConnectFailed("no debug endpoint configured (WEBENV_BROWSER_ENDPOINT)")
        backend = CdpBrowser(endpoint, config)
    return BrowserSession(backend, config)


def close_session(session: BrowserSession) -> None:
    session.close()


def observe(session: BrowserSession) -> ObservationDocument:
    return session.observe()


def execute(session: BrowserSession, action: ActionRequest) -> StepOutcome:
    return session.execute(action)
