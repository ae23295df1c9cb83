"""Domain types for the page-observation compiler."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

RAW_DOM_SCHEMA = "raw-dom/1"

# Listener flags harvested by the page instrumentation.
CLICK_LISTENER = "click"
HOVER_LISTENER = "hover"

SEMANTIC_ID_RE = re.compile(r"^[a-z0-9-]{1,64}$")

# Style values assumed when the collection script omits a property.
_STYLE_DEFAULTS = {
    "display": "block",
    "visibility": "visible",
    "opacity": "1",
    "cursor": "auto",
    "pointer-events": "auto",
}


class MalformedSnapshot(ValueError):
    """Raised when a snapshot violates its tree invariants."""


@dataclass
class Box:
    """Absolute page-coordinate rectangle in CSS pixels."""

    x: float = 0.0
    y: float = 0.0
    width: float = 0.0
    height: float = 0.0

    def to_dict(self) -> dict[str, float]:
        return {"x": self.x, "y": self.y, "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Box:
        return cls(
            x=float(data.get("x", 0.0)),
            y=float(data.get("y", 0.0)),
            width=float(data.get("width", 0.0)),
            height=float(data.get("height", 0.0)),
        )


@dataclass
class RawNode:
    """One element as captured by the in-page collection script.

    ``attributes`` preserves source order and doubles as the carrier for
    runtime state the collector writes back (live ``value``, ``checked``,
    ``data-focused``, ``data-selection-start``/``-end``).
    """

    tag: str
    attributes: dict[str, str] = field(default_factory=dict)
    text: str | None = None
    computed_style: dict[str, str] = field(default_factory=dict)
    box: Box = field(default_factory=Box)
    scrollable: bool = False
    listener_flags: set[str] = field(default_factory=set)
    children: list[RawNode] = field(default_factory=list)
    # Index into the collector's element array, for writing assigned ids
    # back onto the live DOM. Absent on offline snapshots.
    capture_index: int | None = None

    def style(self, prop: str) -> str:
        return self.computed_style.get(prop, _STYLE_DEFAULTS.get(prop, ""))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"tag": self.tag}
        if self.attributes:
            out["attributes"] = dict(self.attributes)
        if self.text is not None:
            out["text"] = self.text
        if self.computed_style:
            out["style"] = dict(self.computed_style)
        out["box"] = self.box.to_dict()
        if self.scrollable:
            out["scrollable"] = True
        if self.listener_flags:
            out["listeners"] = sorted(self.listener_flags)
        if self.capture_index is not None:
            out["cap"] = self.capture_index
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RawNode:
        if not isinstance(data, dict) or "tag" not in data:
            raise MalformedSnapshot("node missing 'tag'")
        return cls(
            tag=str(data["tag"]).lower(),
            attributes={str(k): str(v) for k, v in (data.get("attributes") or {}).items()},
            text=data.get("text"),
            computed_style={str(k): str(v) for k, v in (data.get("style") or {}).items()},
            box=Box.from_dict(data.get("box") or {}),
            scrollable=bool(data.get("scrollable", False)),
            listener_flags=set(data.get("listeners") or []),
            children=[cls.from_dict(c) for c in (data.get("children") or [])],
            capture_index=data.get("cap"),
        )


@dataclass
class RawDomSnapshot:
    """A full page capture: element tree plus viewport and address."""

    root: RawNode
    viewport_width: int = 1280
    viewport_height: int = 720
    url: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": RAW_DOM_SCHEMA,
            "url": self.url,
            "viewport": {"width": self.viewport_width, "height": self.viewport_height},
            "root": self.root.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RawDomSnapshot:
        schema = data.get("schema", RAW_DOM_SCHEMA)
        if schema != RAW_DOM_SCHEMA:
            raise MalformedSnapshot(f"unsupported snapshot schema {schema!r}")
        if "root" not in data:
            raise MalformedSnapshot("snapshot missing 'root'")
        viewport = data.get("viewport") or {}
        return cls(
            root=RawNode.from_dict(data["root"]),
            viewport_width=int(viewport.get("width", 1280)),
            viewport_height=int(viewport.get("height", 720)),
            url=str(data.get("url", "")),
        )

    @classmethod
    def from_json(cls, text: str) -> RawDomSnapshot:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedSnapshot(f"snapshot is not valid JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass
class StrippedNode:
    """A filtered element on its way into the compact observation."""

    tag: str
    retained_attributes: dict[str, str] = field(default_factory=dict)
    semantic_id: str | None = None
    data_clickable: bool = False
    data_maybe_hoverable: bool = False
    text: str | None = None
    children: list[StrippedNode] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class InputStateRecord:
    """Live state of a text input, textarea, or contenteditable region."""

    semantic_id: str
    input_type: str
    current_value: str = ""
    numeric_value: float | None = None
    editable: bool = True
    selection_range: tuple[int, int] | None = None
    focused: bool = False

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.semantic_id,
            "type": self.input_type,
            "value": self.current_value,
            "editable": self.editable,
            "focused": self.focused,
        }
        if self.numeric_value is not None:
            out["numeric_value"] = self.numeric_value
        if self.selection_range is not None:
            out["selection"] = [self.selection_range[0], self.selection_range[1]]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> InputStateRecord:
        sel = data.get("selection")
        return cls(
            semantic_id=data["id"],
            input_type=data["type"],
            current_value=data.get("value", ""),
            numeric_value=data.get("numeric_value"),
            editable=bool(data.get("editable", True)),
            selection_range=(int(sel[0]), int(sel[1])) if sel is not None else None,
            focused=bool(data.get("focused", False)),
        )


@dataclass
class OptionRecord:
    """One option of a select, with its namespaced identifier."""

    semantic_id: str
    text: str
    value: str
    selected: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.semantic_id,
            "text": self.text,
            "value": self.value,
            "selected": self.selected,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OptionRecord:
        return cls(
            semantic_id=data["id"],
            text=data.get("text", ""),
            value=data.get("value", ""),
            selected=bool(data.get("selected", False)),
        )


@dataclass
class SelectStateRecord:
    """Selection state of a select element."""

    semantic_id: str
    current_value: str = ""
    selected_index: int = -1
    multiple: bool = False
    options: list[OptionRecord] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.semantic_id,
            "value": self.current_value,
            "selected_index": self.selected_index,
            "multiple": self.multiple,
            "options": [o.to_dict() for o in self.options],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SelectStateRecord:
        return cls(
            semantic_id=data["id"],
            current_value=data.get("value", ""),
            selected_index=int(data.get("selected_index", -1)),
            multiple=bool(data.get("multiple", False)),
            options=[OptionRecord.from_dict(o) for o in data.get("options", [])],
        )


@dataclass
class ClickableEntry:
    """Semantic id plus the visible label it was derived from."""

    semantic_id: str
    label: str = ""

    def to_dict(self) -> dict[str, str]:
        return {"id": self.semantic_id, "label": self.label}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ClickableEntry:
        return cls(semantic_id=data["id"], label=data.get("label", ""))


@dataclass
class ObservationDocument:
    """The compact five-component page observation delivered to agents."""

    stripped_html: str
    clickables: list[ClickableEntry] = field(default_factory=list)
    hoverables: list[str] = field(default_factory=list)
    inputs: list[InputStateRecord] = field(default_factory=list)
    selects: list[SelectStateRecord] = field(default_factory=list)
    url: str = ""
    page_title: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "html": self.stripped_html,
            "clickables": [c.to_dict() for c in self.clickables],
            "hoverables": list(self.hoverables),
            "inputs": [i.to_dict() for i in self.inputs],
            "selects": [s.to_dict() for s in self.selects],
            "url": self.url,
            "title": self.page_title,
        }

    def to_json(self, pretty: bool = False) -> str:
        if pretty:
            return json.dumps(self.to_dict(), sort_keys=True, indent=2)
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ObservationDocument:
        return cls(
            stripped_html=data["html"],
            clickables=[ClickableEntry.from_dict(c) for c in data.get("clickables", [])],
            hoverables=list(data.get("hoverables", [])),
            inputs=[InputStateRecord.from_dict(i) for i in data.get("inputs", [])],
            selects=[SelectStateRecord.from_dict(s) for s in data.get("selects", [])],
            url=data.get("url", ""),
            page_title=data.get("title", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> ObservationDocument:
        return cls.from_dict(json.loads(text))

    def clickable_ids(self) -> set[str]:
        return {c.semantic_id for c in self.clickables}

    def input_ids(self) -> set[str]:
        return {i.semantic_id for i in self.inputs}

    def select_ids(self) -> set[str]:
        return {s.semantic_id for s in self.selects}

    def all_ids(self) -> set[str]:
        ids = self.clickable_ids() | set(self.hoverables) | self.input_ids() | self.select_ids()
        for sel in self.selects:
            ids.update(o.semantic_id for o in sel.options)
        return ids
