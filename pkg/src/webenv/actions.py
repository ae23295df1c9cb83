"""The fixed 14-action vocabulary agents emit, with parsing and validation."""

from __future__ import annotations

import json
from dataclasses import MISSING, dataclass, fields
from typing import Union

from webenv.obs.types import ObservationDocument

ACTION_SCHEMA = "action/1"

NAMED_KEYS = frozenset(
    {
        "Enter",
        "Escape",
        "Tab",
        "ArrowUp",
        "ArrowDown",
        "ArrowLeft",
        "ArrowRight",
        "Backspace",
        "Delete",
        "Home",
        "End",
        "PageUp",
        "PageDown",
    }
)


@dataclass(frozen=True)
class ClickElement:
    target: str


@dataclass(frozen=True)
class HoverElement:
    target: str


@dataclass(frozen=True)
class KeyPress:
    key: str
    target: str | None = None


@dataclass(frozen=True)
class TypeText:
    target: str
    text: str
    press_enter: bool = False


@dataclass(frozen=True)
class ClearInput:
    target: str


@dataclass(frozen=True)
class SelectOption:
    target: str
    option_id: str


@dataclass(frozen=True)
class Navigate:
    url: str


@dataclass(frozen=True)
class Back:
    pass


@dataclass(frozen=True)
class Forward:
    pass


@dataclass(frozen=True)
class Refresh:
    pass


@dataclass(frozen=True)
class NewTab:
    url: str | None = None


@dataclass(frozen=True)
class SwitchTab:
    index: int


@dataclass(frozen=True)
class CloseTab:
    index: int


@dataclass(frozen=True)
class Terminate:
    answer: str | None = None


ActionRequest = Union[
    ClickElement,
    HoverElement,
    KeyPress,
    TypeText,
    ClearInput,
    SelectOption,
    Navigate,
    Back,
    Forward,
    Refresh,
    NewTab,
    SwitchTab,
    CloseTab,
    Terminate,
]

_ACTION_NAMES: dict[type, str] = {
    ClickElement: "click",
    HoverElement: "hover",
    KeyPress: "key",
    TypeText: "type",
    ClearInput: "clear",
    SelectOption: "select",
    Navigate: "navigate",
    Back: "back",
    Forward: "forward",
    Refresh: "refresh",
    NewTab: "new_tab",
    SwitchTab: "switch_tab",
    CloseTab: "close_tab",
    Terminate: "terminate",
}
_ACTION_TYPES = {name: cls for cls, name in _ACTION_NAMES.items()}

# Wire field names where they differ from the dataclass field.
_WIRE_FIELD = {"press_enter": "enter", "option_id": "option"}
_FIELD_FROM_WIRE = {wire: attr for attr, wire in _WIRE_FIELD.items()}


@dataclass
class ActionValidationError:
    code: str  # UnknownAction | UnknownTarget | TargetNotInteractable | MissingParameter | BadParameter
    message: str
    target: str | None = None

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.target is not None:
            out["target"] = self.target
        return out


class ActionParseError(ValueError):
    """Raised when action JSON cannot be decoded into a known variant."""

    def __init__(self, error: ActionValidationError):
        super().__init__(f"{error.code}: {error.message}")
        self.error = error


def _bad(code: str, message: str, target: str | None = None) -> ActionParseError:
    return ActionParseError(ActionValidationError(code=code, message=message, target=target))


def valid_key(key: str) -> bool:
    return key in NAMED_KEYS or (len(key) == 1 and key.isprintable())


def parse_action(raw: str | dict) -> ActionRequest:
    """Decode an action JSON object; strict about names, types, and keys."""
    if isinstance(raw, str):
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _bad("BadParameter", f"action is not valid JSON: {exc}") from exc
    else:
        data = raw
    if not isinstance(data, dict):
        raise _bad("BadParameter", "action must be a JSON object")
    schema = data.get("schema", ACTION_SCHEMA)
    if schema != ACTION_SCHEMA:
        raise _bad("BadParameter", f"unsupported action schema {schema!r}")
    name = data.get("action")
    if name is None:
        raise _bad("MissingParameter", "missing 'action' field")
    cls = _ACTION_TYPES.get(name)
    if cls is None:
        raise _bad("UnknownAction", f"unknown action {name!r}")

    kwargs = {}
    for f in fields(cls):
        wire_name = _WIRE_FIELD.get(f.name, f.name)
        if wire_name in data:
            kwargs[f.name] = data[wire_name]
        elif f.default is MISSING:
            raise _bad("MissingParameter", f"action {name!r} requires {wire_name!r}")

    try:
        action = cls(**kwargs)
    except TypeError as exc:
        raise _bad("BadParameter", str(exc)) from exc

    return _check_types(action, name)


def _check_types(action: ActionRequest, name: str) -> ActionRequest:
    for attr, kind in (("target", str), ("text", str), ("url", str), ("answer", str), ("option_id", str)):
        if hasattr(action, attr):
            value = getattr(action, attr)
            optional = attr in ("answer",) or (attr == "url" and isinstance(action, NewTab)) or (
                attr == "target" and isinstance(action, KeyPress)
            )
            if value is None and optional:
                continue
            if not isinstance(value, kind):
                raise _bad("BadParameter", f"{name}.{_WIRE_FIELD.get(attr, attr)} must be a string")
    if isinstance(action, (SwitchTab, CloseTab)):
        if isinstance(action.index, bool) or not isinstance(action.index, int):
            raise _bad("BadParameter", f"{name}.index must be an integer")
        if action.index < 0:
            raise _bad("BadParameter", f"{name}.index must be non-negative")
    if isinstance(action, TypeText) and not isinstance(action.press_enter, bool):
        raise _bad("BadParameter", "type.enter must be a boolean")
    if isinstance(action, KeyPress):
        if not isinstance(action.key, str) or not valid_key(action.key):
            raise _bad("BadParameter", f"unsupported key {action.key!r}")
    if isinstance(action, Navigate) and not action.url:
        raise _bad("BadParameter", "navigate.url must be non-empty")
    return action


def serialize_action(action: ActionRequest) -> dict:
    name = _ACTION_NAMES[type(action)]
    out: dict = {"schema": ACTION_SCHEMA, "action": name}
    for f in fields(action):
        value = getattr(action, f.name)
        if value is None:
            continue
        out[_WIRE_FIELD.get(f.name, f.name)] = value
    return out


def action_to_json(action: ActionRequest) -> str:
    return json.dumps(serialize_action(action), sort_keys=True, separators=(",", ":"))


def action_target(action: ActionRequest) -> str | None:
    """The semantic id an action operates on, when it has one."""
    return getattr(action, "target", None) or (action.option_id if isinstance(action, SelectOption) else None)


def validate_action(
    action: ActionRequest,
    obs: ObservationDocument,
    tab_count: int | None = None,
) -> ActionValidationError | None:
    """Check an action against the latest observation; None means ok."""
    if isinstance(action, ClickElement):
        if action.target not in obs.clickable_ids():
            return ActionValidationError("UnknownTarget", f"{action.target!r} is not clickable", action.target)
    elif isinstance(action, HoverElement):
        if action.target not in set(obs.hoverables):
            return ActionValidationError("UnknownTarget", f"{action.target!r} is not hoverable", action.target)
    elif isinstance(action, (TypeText, ClearInput)):
        record = next((r for r in obs.inputs if r.semantic_id == action.target), None)
        if record is None:
            return ActionValidationError("UnknownTarget", f"{action.target!r} is not an input", action.target)
        if not record.editable:
            return ActionValidationError("TargetNotInteractable", f"{action.target!r} is not editable", action.target)
    elif isinstance(action, SelectOption):
        select = next((s for s in obs.selects if s.semantic_id == action.target), None)
        if select is None:
            return ActionValidationError("UnknownTarget", f"{action.target!r} is not a select", action.target)
        if action.option_id not in {o.semantic_id for o in select.options}:
            return ActionValidationError(
                "UnknownTarget", f"{action.option_id!r} is not an option of {action.target!r}", action.option_id
            )
    elif isinstance(action, KeyPress):
        if action.target is not None and action.target not in obs.all_ids():
            return ActionValidationError("UnknownTarget", f"{action.target!r} is not in the observation", action.target)
    elif isinstance(action, (SwitchTab, CloseTab)):
        if tab_count is not None and not 0 <= action.index < tab_count:
            return ActionValidationError("BadParameter", f"tab index {action.index} out of range (0..{tab_count - 1})")
    return None
