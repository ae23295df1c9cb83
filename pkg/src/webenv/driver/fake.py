"""Scripted in-process browser backend for tests.

Pages are DOM models (RawDomSnapshot trees) loaded from registered HTML
routes or fetched over real HTTP. Click/hover/key behaviors are callbacks
that mutate the model and may emit delayed network events, which is enough
to exercise quiescence, retries, and tab management without a browser.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urljoin

import httpx

from webenv.driver.page import NavigationError, PageOperationError
from webenv.obs.serialize import parse_plain_html
from webenv.obs.types import Box, RawDomSnapshot, RawNode
from webenv.quiescence import END, START, NetworkEvent

BLANK_HTML = "<html><head><title></title></head><body></body></html>"


@dataclass
class FakeSite:
    """Routes and scripted behaviors shared by all pages of a fake browser."""

    routes: dict[str, str] = field(default_factory=dict)  # path or full url -> html
    on_click: dict[str, Callable[["FakePage"], None]] = field(default_factory=dict)
    on_hover: dict[str, Callable[["FakePage"], None]] = field(default_factory=dict)
    on_key: dict[tuple[str, str], Callable[["FakePage"], None]] = field(default_factory=dict)
    fetch_http: bool = True

    def lookup(self, url: str) -> str | None:
        if url in self.routes:
            return self.routes[url]
        path = url.split("://", 1)[-1]
        path = "/" + path.split("/", 1)[1] if "/" in path else "/"
        return self.routes.get(path)


class FakePage:
    def __init__(self, browser: FakeBrowser, url: str | None):
        self._browser = browser
        self._site = browser.site
        self._model: RawDomSnapshot = parse_plain_html(BLANK_HTML, url="about:blank")
        self._capture: list[RawNode] = []
        self._events: list[NetworkEvent] = []
        self._events_lock = threading.Lock()
        self._history: list[str] = []
        self._history_index = -1
        self._timers: list[threading.Timer] = []
        self._closed = False
        if url:
            self.navigate(url)

    # -- instrumentation & events ------------------------------------------------

    def ensure_instrumented(self) -> None:
        if self._closed:
            raise PageOperationError("page closed")

    def emit_request(
        self,
        duration: float | None,
        mutate: Callable[[FakePage], None] | None = None,
    ) -> str:
        """Start a synthetic request; after ``duration`` it ends and applies ``mutate``.

        ``duration=None`` never completes (a held request).
        """
        request_id = f"req-{uuid.uuid4().hex[:6]}"
        with self._events_lock:
            self._events.append(NetworkEvent(START, request_id, time.time()))
        if duration is not None:
            def finish() -> None:
                if mutate is not None:
                    mutate(self)
                with self._events_lock:
                    self._events.append(NetworkEvent(END, request_id, time.time()))

            timer = threading.Timer(duration, finish)
            timer.daemon = True
            timer.start()
            self._timers.append(timer)
        return request_id

    def drain_events(self) -> list[NetworkEvent]:
        with self._events_lock:
            out, self._events = self._events, []
            return out

    # -- navigation ----------------------------------------------------------------

    def navigate(self, url: str) -> None:
        self._load(url)
        self._history = self._history[: self._history_index + 1] + [url]
        self._history_index += 1

    def history_back(self) -> None:
        if self._history_index > 0:
            self._history_index -= 1
            self._load(self._history[self._history_index])

    def history_forward(self) -> None:
        if self._history_index < len(self._history) - 1:
            self._history_index += 1
            self._load(self._history[self._history_index])

    def reload(self) -> None:
        if self._history_index >= 0:
            self._load(self._history[self._history_index])

    def _load(self, url: str) -> None:
        html = self._site.lookup(url) if self._site else None
        if html is None:
            if url.startswith("http") and (self._site is None or self._site.fetch_http):
                try:
                    response = httpx.get(url, timeout=10.0, follow_redirects=True)
                    response.raise_for_status()
                except httpx.HTTPError as exc:
                    raise NavigationError(f"{url}: {exc}") from exc
                html = response.text
            else:
                raise NavigationError(f"no route for {url}")
        self._model = parse_plain_html(html, url=url)

    def current_url(self) -> str:
        return self._model.url

    # -- snapshotting -----------------------------------------------------------------

    def snapshot(self) -> RawDomSnapshot:
        self._capture = []
        exported = self._export(self._model.root)
        return RawDomSnapshot(
            root=exported,
            viewport_width=self._model.viewport_width,
            viewport_height=self._model.viewport_height,
            url=self._model.url,
        )

    def _export(self, node: RawNode) -> RawNode:
        index = len(self._capture)
        self._capture.append(node)
        return RawNode(
            tag=node.tag,
            attributes=dict(node.attributes),
            text=node.text,
            computed_style=dict(node.computed_style),
            box=Box(node.box.x, node.box.y, node.box.width, node.box.height),
            scrollable=node.scrollable,
            listener_flags=set(node.listener_flags),
            children=[self._export(c) for c in node.children],
            capture_index=index,
        )

    def apply_semantic_ids(self, mapping: dict[str, int], clickable_ids: set[str]) -> None:
        # Stale annotations are cleared first, as a real page script would.
        for node in self._walk():
            node.attributes.pop("data-semantic-id", None)
            node.attributes.pop("data-clickable", None)
        for semantic_id, index in mapping.items():
            if 0 <= index < len(self._capture):
                node = self._capture[index]
                node.attributes["data-semantic-id"] = semantic_id
                if semantic_id in clickable_ids:
                    node.attributes["data-clickable"] = "true"

    # -- element access -----------------------------------------------------------------

    def _walk(self, node: RawNode | None = None):
        node = node or self._model.root
        yield node
        for child in node.children:
            yield from self._walk(child)

    def find(self, semantic_id: str) -> RawNode | None:
        for node in self._walk():
            if node.attributes.get("data-semantic-id") == semantic_id:
                return node
        return None

    def find_by_attr(self, name: str, value: str) -> RawNode | None:
        for node in self._walk():
            if node.attributes.get(name) == value:
                return node
        return None

    def has_element(self, semantic_id: str) -> bool:
        return self.find(semantic_id) is not None

    def _require(self, semantic_id: str) -> RawNode:
        node = self.find(semantic_id)
        if node is None:
            raise PageOperationError(f"no element {semantic_id!r}")
        return node

    # -- primitives -------------------------------------------------------------------------

    def scroll_into_view(self, semantic_id: str) -> None:
        self._require(semantic_id)

    def click(self, semantic_id: str) -> None:
        node = self._require(semantic_id)
        behavior = self._site.on_click.get(semantic_id) if self._site else None
        if behavior is not None:
            behavior(self)
            return
        if node.tag == "a" and node.attributes.get("href"):
            self.navigate(urljoin(self.current_url(), node.attributes["href"]))

    def hover(self, semantic_id: str) -> None:
        self._require(semantic_id)
        behavior = self._site.on_hover.get(semantic_id) if self._site else None
        if behavior is not None:
            behavior(self)

    def press_key(self, key: str, semantic_id: str | None) -> None:
        if semantic_id is not None:
            self._focus(self._require(semantic_id))
        behavior = self._site.on_key.get((semantic_id or "", key)) if self._site else None
        if behavior is not None:
            behavior(self)

    def set_text(self, semantic_id: str, text: str) -> None:
        node = self._require(semantic_id)
        if node.attributes.get("contenteditable", "false") not in ("false",):
            node.text = text
        else:
            node.attributes["value"] = text
        self._focus(node)

    def clear_text(self, semantic_id: str) -> None:
        node = self._require(semantic_id)
        if node.attributes.get("contenteditable", "false") not in ("false",):
            node.text = None
        else:
            node.attributes["value"] = ""
        self._focus(node)

    def select_option(self, semantic_id: str, option_id: str) -> None:
        select = self._require(semantic_id)
        options = [n for n in self._walk(select) if n.tag == "option"]
        chosen = next((o for o in options if o.attributes.get("data-semantic-id") == option_id), None)
        if chosen is None:
            raise PageOperationError(f"{option_id!r} is not an option of {semantic_id!r}")
        multiple = "multiple" in select.attributes
        if not multiple:
            for option in options:
                option.attributes.pop("selected", None)
        chosen.attributes["selected"] = ""
        select.attributes["value"] = chosen.attributes.get("value", chosen.text or "")

    def _focus(self, node: RawNode) -> None:
        for other in self._walk():
            other.attributes.pop("data-focused", None)
        node.attributes["data-focused"] = "true"

    def settle_frames(self) -> None:
        pass

    def close(self) -> None:
        for timer in self._timers:
            timer.cancel()
        self._closed = True


class FakeBrowser:
    """BrowserBackend over scripted pages; multiple tabs share one site."""

    def __init__(self, site: FakeSite | None = None):
        self.site = site or FakeSite()
        self.pages: list[FakePage] = []
        self.closed = False

    def new_page(self, url: str | None = None) -> FakePage:
        page = FakePage(self, url)
        self.pages.append(page)
        return page

    def close(self) -> None:
        for page in self.pages:
            page.close()
        self.closed = True
