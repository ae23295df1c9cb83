"""Compile raw DOM snapshots into compact five-component observations.

Pipeline: tag/visibility filtering, attribute stripping, interactivity
detection, container flattening and empty-node pruning, semantic id
assignment, then runtime state capture for form controls.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from webenv.obs.serialize import MINIMAL_DOCUMENT, serialize_stripped
from webenv.obs.types import (
    CLICK_LISTENER,
    HOVER_LISTENER,
    Box,
    ClickableEntry,
    InputStateRecord,
    MalformedSnapshot,
    ObservationDocument,
    OptionRecord,
    RawDomSnapshot,
    RawNode,
    SelectStateRecord,
    StrippedNode,
)

# Entire tag classes never useful to an agent.
EXCLUDED_TAGS = frozenset(
    {"script", "style", "link", "meta", "noscript", "template", "iframe", "video", "audio", "canvas"}
)

# head/title are CSS-hidden in every real page but carry the page title;
# options of a closed select render with zero-size boxes yet must be cloned
# into the select state. Both bypass the visibility and geometry drops.
_VISIBILITY_EXEMPT_TAGS = frozenset({"head", "title", "option", "optgroup"})

# Safe attributes preserved verbatim, plus any aria-*/data-*.
# contenteditable is included so editable regions stay identifiable
# after stripping and across serialization round-trips.
ATTRIBUTE_WHITELIST = frozenset(
    {
        "id",
        "name",
        "value",
        "placeholder",
        "role",
        "tabindex",
        "href",
        "type",
        "title",
        "alt",
        "checked",
        "disabled",
        "selected",
        "for",
        "contenteditable",
    }
)

# Annotation and runtime-state attributes owned by the pipeline itself:
# consumed on the way in, regenerated (or surfaced as records) on the way out.
RESERVED_ATTRIBUTES = frozenset(
    {
        "data-semantic-id",
        "data-clickable",
        "data-maybe-hoverable",
        "data-focused",
        "data-selection-start",
        "data-selection-end",
    }
)

# Tags that may legitimately be empty and are never pruned for emptiness.
# option covers blank placeholder entries, whose removal would shift the
# selected index of their parent select.
EMPTY_OK_TAGS = frozenset({"input", "select", "textarea", "button", "img", "head", "title", "option"})

# Tags whose bare presence makes an element clickable.
NATIVE_CLICKABLE_TAGS = frozenset({"button", "input", "select", "summary", "area"})
CLICKABLE_ROLES = frozenset({"button", "link"})

# Non-semantic wrappers eligible for chain collapsing.
_CONTAINER_TAGS = frozenset({"div", "span"})

# input types whose value is free text (captured as input state).
TEXT_INPUT_TYPES = frozenset(
    {"text", "search", "email", "url", "tel", "password", "number", "date", "datetime-local", "month", "week", "time"}
)

SLUG_MAX_LEN = 32
SEMANTIC_ID_MAX_LEN = 64
_LABEL_MAX_LEN = 120

_WHITESPACE_RE = re.compile(r"\s+")
_NON_SLUG_RE = re.compile(r"[^a-z0-9]+")


def normalize_text(text: str | None) -> str | None:
    """Collapse whitespace runs; whitespace-only text becomes None."""
    if text is None:
        return None
    collapsed = _WHITESPACE_RE.sub(" ", text).strip()
    return collapsed or None


def filter_node(node: RawNode, page_extent: Box | None = None) -> bool:
    """Decide whether a raw node (and its subtree) survives filtering.

    Returns True to keep. ``page_extent`` is the page's full scrollable
    extent; when None the off-extent test is skipped.
    """
    if node.tag in EXCLUDED_TAGS:
        return False
    if node.tag in _VISIBILITY_EXEMPT_TAGS:
        return True
    if node.style("display") == "none":
        return False
    if node.style("visibility") == "hidden":
        return False
    try:
        if float(node.style("opacity") or "1") == 0.0:
            return False
    except ValueError:
        pass
    if node.box.width == 0 and node.box.height == 0:
        return False
    if page_extent is not None and not node.scrollable and _fully_outside(node.box, page_extent):
        return False
    return True


def _fully_outside(box: Box, extent: Box) -> bool:
    return (
        box.x > extent.x + extent.width
        or box.x + box.width < extent.x
        or box.y > extent.y + extent.height
        or box.y + box.height < extent.y
    )


def filter_attributes(attrs: dict[str, str]) -> dict[str, str]:
    """Keep whitelisted names plus aria-*/data-*, minus pipeline-owned ones."""
    out: dict[str, str] = {}
    for name, value in attrs.items():
        lowered = name.lower()
        if lowered in RESERVED_ATTRIBUTES:
            continue
        if lowered in ATTRIBUTE_WHITELIST or lowered.startswith("aria-") or lowered.startswith("data-"):
            out[lowered] = value
    return out


def detect_clickable(node: RawNode) -> bool:
    """Heuristic interactivity check mirroring what a pointer cursor tells a human."""
    attrs = node.attributes
    if "disabled" in attrs or node.style("pointer-events") == "none":
        return False
    if node.tag in NATIVE_CLICKABLE_TAGS:
        return True
    if node.tag == "a" and "href" in attrs:
        return True
    if CLICK_LISTENER in node.listener_flags or "onclick" in attrs:
        return True
    if attrs.get("role") in CLICKABLE_ROLES:
        return True
    return node.style("cursor") == "pointer"


def detect_hoverable(node: RawNode) -> bool:
    if node.style("pointer-events") == "none":
        return False
    if HOVER_LISTENER in node.listener_flags:
        return True
    # The instrumentation marks the live DOM directly; honor the mark even
    # when a snapshot producer did not fold it into listener flags.
    if node.attributes.get("data-maybe-hoverable") == "true":
        return True
    return "onmouseover" in node.attributes or "onmouseenter" in node.attributes


def slugify(label: str, fallback: str = "") -> str:
    """Normalize a label to a short ASCII slug; empty results fall back to ``fallback``."""
    ascii_label = label.encode("ascii", "ignore").decode("ascii").lower()
    slug = _NON_SLUG_RE.sub("-", ascii_label).strip("-")
    if len(slug) > SLUG_MAX_LEN:
        cut = slug[:SLUG_MAX_LEN]
        # Prefer a hyphen boundary unless the cap already lands on one.
        if slug[SLUG_MAX_LEN] != "-" and "-" in cut:
            cut = cut[: cut.rindex("-")]
        slug = cut.rstrip("-")
    if not slug and fallback:
        return slugify(fallback)
    return slug


def prune_and_flatten(tree: StrippedNode) -> StrippedNode | None:
    """Collapse trivial wrapper chains and drop empty non-control elements.

    Returns None when the whole tree prunes away. Single-pass bottom-up
    application reaches the fixpoint.
    """
    pruned_children: list[StrippedNode] = []
    for child in tree.children:
        kept = prune_and_flatten(child)
        if kept is not None:
            pruned_children.append(kept)
    tree.children = pruned_children

    if _is_collapsible_container(tree) and len(tree.children) == 1:
        return tree.children[0]
    if _is_removable_empty(tree):
        return None
    return tree


def _is_collapsible_container(node: StrippedNode) -> bool:
    return (
        node.tag in _CONTAINER_TAGS
        and not node.retained_attributes
        and not node.text
        and node.semantic_id is None
        and not node.data_clickable
        and not node.data_maybe_hoverable
    )


def _is_removable_empty(node: StrippedNode) -> bool:
    if node.children or node.text:
        return False
    if node.tag in EMPTY_OK_TAGS:
        return False
    # Interactive empties (icon buttons and the like) are controls too.
    return not (node.data_clickable or node.data_maybe_hoverable or node.semantic_id)


def _is_id_eligible(node: StrippedNode) -> bool:
    if node.data_clickable or node.data_maybe_hoverable:
        return True
    if node.tag in {"input", "select", "textarea"}:
        return True
    return node.retained_attributes.get("contenteditable", "false") not in ("false",)


def _subtree_text(node: StrippedNode) -> str:
    parts: list[str] = []
    for n in node.walk():
        if n.text:
            parts.append(n.text)
    return " ".join(parts)


def node_label(node: StrippedNode) -> str:
    """The human-visible label a semantic id is derived from."""
    attrs = node.retained_attributes
    if node.tag not in {"input", "select", "textarea"}:
        text = normalize_text(_subtree_text(node))
        if text:
            return text[:_LABEL_MAX_LEN]
    for source in ("placeholder", "aria-label", "alt", "name", "id", "title"):
        value = normalize_text(attrs.get(source))
        if value:
            return value[:_LABEL_MAX_LEN]
    return ""


def _scope_slug(ancestors: list[StrippedNode]) -> str | None:
    """Slug of the nearest ancestor carrying its own name (id/name/aria-label)."""
    for ancestor in reversed(ancestors):
        for source in ("id", "name", "aria-label"):
            value = ancestor.retained_attributes.get(source)
            if value:
                slug = slugify(value)
                if slug:
                    return slug
    return None


def _fit_id(candidate: str, suffix: str = "") -> str:
    limit = SEMANTIC_ID_MAX_LEN - len(suffix)
    if len(candidate) > limit:
        cut = candidate[:limit]
        if "-" in cut and limit < len(candidate) and candidate[limit] != "-":
            cut = cut[: cut.rindex("-")]
        candidate = cut.rstrip("-") or cut[:limit]
    return candidate + suffix


def _claim(candidate: str, used: set[str]) -> str:
    candidate = _fit_id(candidate)
    if candidate not in used:
        used.add(candidate)
        return candidate
    n = 2
    while True:
        attempt = _fit_id(candidate, f"-{n}")
        if attempt not in used:
            used.add(attempt)
            return attempt
        n += 1


def assign_semantic_ids(tree: StrippedNode) -> StrippedNode:
    """Give every interactive node and form control a unique stable id.

    Resolution order on collision: bare slug, then ancestor-scoped slug,
    then numeric suffixes in document order. Option ids are namespaced
    under their parent select.
    """
    eligible: list[tuple[StrippedNode, list[StrippedNode], str]] = []

    def visit(node: StrippedNode, ancestors: list[StrippedNode]) -> None:
        inside_select = any(a.tag == "select" for a in ancestors)
        if not (node.tag == "option" and inside_select) and _is_id_eligible(node):
            eligible.append((node, list(ancestors), slugify(node_label(node), node.tag)))
        ancestors.append(node)
        for child in node.children:
            visit(child, ancestors)
        ancestors.pop()

    visit(tree, [])

    base_counts: dict[str, int] = {}
    for _, _, base in eligible:
        base_counts[base] = base_counts.get(base, 0) + 1

    used: set[str] = set()
    for node, ancestors, base in eligible:
        candidate = base
        if base_counts[base] > 1 or candidate in used:
            scope = _scope_slug(ancestors)
            if scope and not base.startswith(scope + "-"):
                candidate = f"{scope}-{base}"
        node.semantic_id = _claim(candidate, used)
        if node.tag == "select":
            for child in node.walk():
                if child.tag == "option" and child is not node:
                    option_base = slugify(node_label(child), "option")
                    child.semantic_id = _claim(f"{node.semantic_id}-{option_base}", used)
    return tree


def capture_input_state(node: RawNode, semantic_id: str) -> InputStateRecord:
    """Build the live-state record for a text input, textarea, or editable region."""
    attrs = node.attributes
    if node.tag == "input":
        input_type = attrs.get("type", "text").lower() or "text"
        value = attrs.get("value", "")
    elif node.tag == "textarea":
        input_type = "textarea"
        value = attrs.get("value", node.text or "")
    else:
        input_type = "contenteditable"
        value = node.text or ""

    editable = "readonly" not in attrs and "disabled" not in attrs
    numeric: float | None = None
    if input_type == "number":
        try:
            numeric = float(value)
        except ValueError:
            numeric = None

    selection: tuple[int, int] | None = None
    if "data-selection-start" in attrs and "data-selection-end" in attrs:
        try:
            start = int(attrs["data-selection-start"])
            end = int(attrs["data-selection-end"])
        except ValueError:
            start, end = -1, -1
        if 0 <= start <= end <= len(value):
            selection = (start, end)

    return InputStateRecord(
        semantic_id=semantic_id,
        input_type=input_type,
        current_value=value,
        numeric_value=numeric,
        editable=editable,
        selection_range=selection,
        focused=attrs.get("data-focused") == "true",
    )


def _capture_select_state(stripped: StrippedNode, raw: RawNode) -> SelectStateRecord:
    multiple = "multiple" in raw.attributes
    options: list[OptionRecord] = []
    for child in stripped.walk():
        if child.tag == "option" and child is not stripped and child.semantic_id:
            attrs = child.retained_attributes
            text = child.text or ""
            options.append(
                OptionRecord(
                    semantic_id=child.semantic_id,
                    text=text,
                    value=attrs.get("value", text),
                    selected="selected" in attrs,
                )
            )
    if not multiple:
        # Browsers honor only the last selected option of a single select.
        last = max((i for i, o in enumerate(options) if o.selected), default=-1)
        for i, option in enumerate(options):
            option.selected = i == last
    selected_indices = [i for i, o in enumerate(options) if o.selected]
    selected_index = selected_indices[0] if selected_indices else -1
    current_value = options[selected_index].value if selected_index >= 0 else ""
    return SelectStateRecord(
        semantic_id=stripped.semantic_id or "",
        current_value=current_value,
        selected_index=selected_index,
        multiple=multiple,
        options=options,
    )


def _validate_snapshot(snapshot: RawDomSnapshot) -> None:
    seen: set[int] = set()

    def check(node: RawNode) -> None:
        if id(node) in seen:
            raise MalformedSnapshot("node appears more than once in the tree")
        seen.add(id(node))
        if node.box.width < 0 or node.box.height < 0:
            raise MalformedSnapshot(f"<{node.tag}> has negative box dimensions")
        try:
            opacity = float(node.style("opacity") or "1")
        except ValueError:
            opacity = 1.0
        if not 0.0 <= opacity <= 1.0:
            raise MalformedSnapshot(f"<{node.tag}> opacity {opacity} outside [0,1]")
        for child in node.children:
            check(child)

    check(snapshot.root)


def _strip(node: RawNode, extent: Box, raw_of: dict[int, RawNode]) -> StrippedNode | None:
    if not filter_node(node, extent):
        return None
    stripped = StrippedNode(
        tag=node.tag,
        retained_attributes=filter_attributes(node.attributes),
        data_clickable=detect_clickable(node),
        data_maybe_hoverable=detect_hoverable(node),
        text=normalize_text(node.text),
    )
    raw_of[id(stripped)] = node
    for child in node.children:
        kept = _strip(child, extent, raw_of)
        if kept is not None:
            stripped.children.append(kept)
    return stripped


def _page_extent(snapshot: RawDomSnapshot) -> Box:
    root = snapshot.root.box
    width = max(root.x + root.width, float(snapshot.viewport_width))
    height = max(root.y + root.height, float(snapshot.viewport_height))
    x = min(root.x, 0.0)
    y = min(root.y, 0.0)
    return Box(x=x, y=y, width=width - x, height=height - y)


def _is_text_control(raw: RawNode) -> bool:
    if raw.tag == "textarea":
        return True
    if raw.tag == "input":
        return raw.attributes.get("type", "text").lower() in TEXT_INPUT_TYPES
    return raw.attributes.get("contenteditable", "false") not in ("false",)


@dataclass
class CompiledObservation:
    """An observation plus the live-DOM indexes its ids map onto."""

    document: ObservationDocument
    capture_index_by_id: dict[str, int]


def compile_observation(snapshot: RawDomSnapshot) -> ObservationDocument:
    """Run the full pipeline; identical snapshots yield byte-identical output."""
    return compile_observation_detailed(snapshot).document


def compile_observation_detailed(snapshot: RawDomSnapshot) -> CompiledObservation:
    _validate_snapshot(snapshot)
    extent = _page_extent(snapshot)
    raw_of: dict[int, RawNode] = {}

    stripped = _strip(snapshot.root, extent, raw_of)
    if stripped is not None:
        stripped = prune_and_flatten(stripped)
    if stripped is None:
        document = ObservationDocument(stripped_html=MINIMAL_DOCUMENT, url=snapshot.url)
        return CompiledObservation(document=document, capture_index_by_id={})

    assign_semantic_ids(stripped)

    clickables: list[ClickableEntry] = []
    hoverables: list[str] = []
    inputs: list[InputStateRecord] = []
    selects: list[SelectStateRecord] = []
    page_title = ""
    focus_taken = False

    for node in stripped.walk():
        if node.tag == "title" and not page_title:
            page_title = node.text or ""
        if node.semantic_id is None:
            continue
        if node.data_maybe_hoverable:
            hoverables.append(node.semantic_id)
        raw = raw_of.get(id(node))
        if raw is not None and node.tag == "select":
            selects.append(_capture_select_state(node, raw))
        elif raw is not None and _is_text_control(raw):
            # Text controls are reached through type/clear, so they live in
            # the inputs list rather than the click-affordance list.
            record = capture_input_state(raw, node.semantic_id)
            if record.focused:
                if focus_taken:
                    record.focused = False
                focus_taken = True
            inputs.append(record)
        elif node.data_clickable:
            clickables.append(ClickableEntry(semantic_id=node.semantic_id, label=node_label(node)))

    capture_index_by_id: dict[str, int] = {}
    for node in stripped.walk():
        if node.semantic_id is not None:
            raw = raw_of.get(id(node))
            if raw is not None and raw.capture_index is not None:
                capture_index_by_id[node.semantic_id] = raw.capture_index

    document = ObservationDocument(
        stripped_html=serialize_stripped(stripped),
        clickables=clickables,
        hoverables=hoverables,
        inputs=inputs,
        selects=selects,
        url=snapshot.url,
        page_title=page_title,
    )
    return CompiledObservation(document=document, capture_index_by_id=capture_index_by_id)
