"""Remote-debugging (DevTools wire protocol) browser backend.

One WebSocket connection to the browser endpoint, flat session routing,
a background reader thread, and JSON-evaluating primitives on top. The
instrumentation script is armed for every new document of every tab.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from importlib import resources

import httpx
from websockets.sync.client import connect as ws_connect

from webenv.driver.page import NavigationError, PageOperationError
from webenv.obs.types import RawDomSnapshot
from webenv.quiescence import NetworkEvent

logger = logging.getLogger(__name__)

BROWSER_ENDPOINT_ENV = "WEBENV_BROWSER_ENDPOINT"
COMMAND_TIMEOUT_S = 30.0

_KEY_DEFINITIONS = {
    "Enter": ("Enter", "Enter", 13, "\r"),
    "Escape": ("Escape", "Escape", 27, None),
    "Tab": ("Tab", "Tab", 9, "\t"),
    "ArrowUp": ("ArrowUp", "ArrowUp", 38, None),
    "ArrowDown": ("ArrowDown", "ArrowDown", 40, None),
    "ArrowLeft": ("ArrowLeft", "ArrowLeft", 37, None),
    "ArrowRight": ("ArrowRight", "ArrowRight", 39, None),
    "Backspace": ("Backspace", "Backspace", 8, None),
    "Delete": ("Delete", "Delete", 46, None),
    "Home": ("Home", "Home", 36, None),
    "End": ("End", "End", 35, None),
    "PageUp": ("PageUp", "PageUp", 33, None),
    "PageDown": ("PageDown", "PageDown", 34, None),
}


def instrumentation_script() -> str:
    return resources.files("webenv.driver").joinpath("assets/instrumentation.js").read_text()


def resolve_debug_endpoint(configured: str | None = None) -> str | None:
    return configured or os.environ.get(BROWSER_ENDPOINT_ENV)


class CdpError(RuntimeError):
    pass


class CdpBrowser:
    """BrowserBackend over one browser-level DevTools connection."""

    def __init__(self, endpoint: str, config=None):
        from webenv.driver.session import ConnectFailed, SessionConfig

        self.config = config or SessionConfig()
        ws_url = endpoint
        if endpoint.startswith("http"):
            try:
                version = httpx.get(f"{endpoint.rstrip('/')}/json/version", timeout=10.0).json()
                ws_url = version["webSocketDebuggerUrl"]
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                raise ConnectFailed(f"cannot resolve debugger URL from {endpoint}: {exc}") from exc
        try:
            self._ws = ws_connect(ws_url, max_size=64 * 1024 * 1024)
        except Exception as exc:
            raise ConnectFailed(f"cannot connect to {ws_url}: {exc}") from exc
        self._next_id = 1
        self._lock = threading.Lock()
        self._pending: dict[int, dict] = {}
        self._pending_cv = threading.Condition(self._lock)
        self._closed = False
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    # -- wire plumbing ----------------------------------------------------------

    def _read_loop(self) -> None:
        while not self._closed:
            try:
                raw = self._ws.recv()
            except Exception:
                break
            try:
                message = json.loads(raw)
            except ValueError:
                continue
            if "id" in message:
                with self._pending_cv:
                    self._pending[message["id"]] = message
                    self._pending_cv.notify_all()
            # protocol events are not needed: quiescence runs on in-page data

    def command(self, method: str, params: dict | None = None, session_id: str | None = None) -> dict:
        with self._lock:
            command_id = self._next_id
            self._next_id += 1
            payload: dict = {"id": command_id, "method": method, "params": params or {}}
            if session_id:
                payload["sessionId"] = session_id
            self._ws.send(json.dumps(payload))
        deadline = time.monotonic() + COMMAND_TIMEOUT_S
        with self._pending_cv:
            while command_id not in self._pending:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    raise CdpError(f"{method}: no response within {COMMAND_TIMEOUT_S}s")
                self._pending_cv.wait(timeout=remaining)
            message = self._pending.pop(command_id)
        if "error" in message:
            raise CdpError(f"{method}: {message['error'].get('message')}")
        return message.get("result", {})

    # -- BrowserBackend ------------------------------------------------------------

    def new_page(self, url: str | None = None) -> CdpPage:
        target = self.command("Target.createTarget", {"url": "about:blank"})
        attached = self.command("Target.attachToTarget", {"targetId": target["targetId"], "flatten": True})
        page = CdpPage(self, target["targetId"], attached["sessionId"])
        page.init(self.config)
        if url:
            page.navigate(url)
        return page

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            self._ws.close()
        except Exception:
            pass


class CdpPage:
    def __init__(self, browser: CdpBrowser, target_id: str, session_id: str):
        self._browser = browser
        self._target_id = target_id
        self._session_id = session_id

    def _cmd(self, method: str, params: dict | None = None) -> dict:
        return self._browser.command(method, params, self._session_id)

    def init(self, config) -> None:
        self._cmd("Page.enable")
        self._cmd("Runtime.enable")
        self._cmd(
            "Emulation.setDeviceMetricsOverride",
            {
                "width": config.viewport_width,
                "height": config.viewport_height,
                "deviceScaleFactor": 1,
                "mobile": False,
            },
        )
        self._cmd("Page.addScriptToEvaluateOnNewDocument", {"source": instrumentation_script()})
        self.ensure_instrumented()

    # -- evaluation helpers ---------------------------------------------------------

    def _evaluate(self, expression: str, await_promise: bool = False):
        result = self._cmd(
            "Runtime.evaluate",
            {"expression": expression, "returnByValue": True, "awaitPromise": await_promise},
        )
        if "exceptionDetails" in result:
            detail = result["exceptionDetails"].get("exception", {}).get("description", "evaluation failed")
            raise PageOperationError(detail)
        return result.get("result", {}).get("value")

    def ensure_instrumented(self) -> None:
        self._evaluate(instrumentation_script())

    # -- navigation ----------------------------------------------------------------

    def navigate(self, url: str) -> None:
        result = self._cmd("Page.navigate", {"url": url})
        if result.get("errorText"):
            raise NavigationError(f"{url}: {result['errorText']}")
        self._wait_document_ready()

    def history_back(self) -> None:
        self._history_step(-1)

    def history_forward(self) -> None:
        self._history_step(+1)

    def _history_step(self, delta: int) -> None:
        history = self._cmd("Page.getNavigationHistory")
        index = history["currentIndex"] + delta
        entries = history["entries"]
        if 0 <= index < len(entries):
            self._cmd("Page.navigateToHistoryEntry", {"entryId": entries[index]["id"]})
            self._wait_document_ready()

    def reload(self) -> None:
        self._cmd("Page.reload")
        self._wait_document_ready()

    def _wait_document_ready(self, timeout: float = 30.0) -> None:
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            try:
                state = self._evaluate("document.readyState")
                if state in ("interactive", "complete"):
                    self.ensure_instrumented()
                    return
            except (PageOperationError, CdpError):
                pass  # navigation in flight
            time.sleep(0.05)
        raise NavigationError("document never became ready")

    def current_url(self) -> str:
        return self._evaluate("location.href") or ""

    # -- observation ------------------------------------------------------------------

    def snapshot(self) -> RawDomSnapshot:
        raw = self._evaluate("JSON.stringify(window.__webenv.snapshot())")
        if not raw:
            raise PageOperationError("collector returned nothing")
        return RawDomSnapshot.from_json(raw)

    def apply_semantic_ids(self, mapping: dict[str, int], clickable_ids: set[str]) -> None:
        payload = json.dumps(mapping)
        clickable = json.dumps(sorted(clickable_ids))
        self._evaluate(f"window.__webenv.applyIds({payload}, {clickable})")

    def drain_events(self) -> list[NetworkEvent]:
        raw = self._evaluate("JSON.stringify(window.__webenv.drainEvents())")
        if not raw:
            return []
        return [NetworkEvent.from_dict(item) for item in json.loads(raw)]

    # -- element primitives ---------------------------------------------------------------

    def _selector(self, semantic_id: str) -> str:
        return json.dumps(f'[data-semantic-id="{semantic_id}"]')

    def has_element(self, semantic_id: str) -> bool:
        return bool(self._evaluate(f"!!document.querySelector({self._selector(semantic_id)})"))

    def scroll_into_view(self, semantic_id: str) -> None:
        self._evaluate(
            f"document.querySelector({self._selector(semantic_id)})"
            '.scrollIntoView({block: "center", inline: "center"})'
        )

    def _center(self, semantic_id: str) -> tuple[float, float]:
        value = self._evaluate(
            f"(() => {{ const r = document.querySelector({self._selector(semantic_id)}).getBoundingClientRect();"
            " return [r.x + r.width / 2, r.y + r.height / 2]; })()"
        )
        if not value:
            raise PageOperationError(f"cannot locate {semantic_id!r}")
        return float(value[0]), float(value[1])

    def click(self, semantic_id: str) -> None:
        x, y = self._center(semantic_id)
        for event_type in ("mousePressed", "mouseReleased"):
            self._cmd(
                "Input.dispatchMouseEvent",
                {"type": event_type, "x": x, "y": y, "button": "left", "clickCount": 1},
            )

    def hover(self, semantic_id: str) -> None:
        x, y = self._center(semantic_id)
        self._cmd("Input.dispatchMouseEvent", {"type": "mouseMoved", "x": x, "y": y})
        time.sleep(0.1)  # give hover handlers a beat before the snapshot

    def press_key(self, key: str, semantic_id: str | None) -> None:
        if semantic_id is not None:
            self._evaluate(f"document.querySelector({self._selector(semantic_id)}).focus()")
        if key in _KEY_DEFINITIONS:
            dom_key, code, vk, text = _KEY_DEFINITIONS[key]
        else:
            dom_key, code, vk, text = key, f"Key{key.upper()}", ord(key.upper()[0]), key
        down: dict = {"type": "rawKeyDown", "key": dom_key, "code": code, "windowsVirtualKeyCode": vk}
        if text is not None:
            down["type"] = "keyDown"
            down["text"] = text
        self._cmd("Input.dispatchKeyEvent", down)
        self._cmd("Input.dispatchKeyEvent", {"type": "keyUp", "key": dom_key, "code": code, "windowsVirtualKeyCode": vk})

    def set_text(self, semantic_id: str, text: str) -> None:
        # Typed through key events so the page's input handlers fire.
        self.clear_text(semantic_id)
        for char in text:
            self._cmd(
                "Input.dispatchKeyEvent",
                {"type": "keyDown", "key": char, "text": char},
            )
            self._cmd("Input.dispatchKeyEvent", {"type": "keyUp", "key": char})

    def clear_text(self, semantic_id: str) -> None:
        selector = self._selector(semantic_id)
        self._evaluate(
            f"(() => {{ const el = document.querySelector({selector}); el.focus();"
            " if (el.select) el.select(); else if (el.isContentEditable) {"
            " const r = document.createRange(); r.selectNodeContents(el);"
            " const s = getSelection(); s.removeAllRanges(); s.addRange(r); } })()"
        )
        self.press_key("Delete", None)

    def select_option(self, semantic_id: str, option_id: str) -> None:
        selector = self._selector(semantic_id)
        option_selector = self._selector(option_id)
        changed = self._evaluate(
            f"(() => {{ const sel = document.querySelector({selector});"
            f" const opt = sel && sel.querySelector({option_selector});"
            " if (!opt) return false;"
            " if (!sel.multiple) for (const o of sel.options) o.selected = false;"
            " opt.selected = true;"
            ' sel.dispatchEvent(new Event("input", {bubbles: true}));'
            ' sel.dispatchEvent(new Event("change", {bubbles: true}));'
            " return true; })()"
        )
        if not changed:
            raise PageOperationError(f"{option_id!r} is not an option of {semantic_id!r}")

    def settle_frames(self) -> None:
        try:
            self._evaluate("window.__webenv.settle()", await_promise=True)
        except (PageOperationError, CdpError):
            logger.debug("frame settle skipped", exc_info=True)

    def close(self) -> None:
        try:
            self._browser.command("Target.closeTarget", {"targetId": self._target_id})
        except CdpError:
            logger.debug("closeTarget failed", exc_info=True)
