"""Deterministic HTML serialization for observations, plus the reverse parser.

Attributes are always emitted in sorted name order so identical trees give
byte-identical documents. The parser maps annotation attributes back onto
listener flags, which is what makes compile(parse(serialize(x))) preserve
the interactive-element sets.
"""

from __future__ import annotations

import html as html_escape
from html.parser import HTMLParser

from webenv.obs.types import (
    CLICK_LISTENER,
    HOVER_LISTENER,
    Box,
    RawDomSnapshot,
    RawNode,
    StrippedNode,
)

MINIMAL_DOCUMENT = "<html><body></body></html>"

VOID_TAGS = frozenset(
    {"area", "base", "br", "col", "embed", "hr", "img", "input", "meta", "source", "track", "wbr"}
)

_NATIVE_SHAPE_TAGS = frozenset({"button", "input", "select", "summary", "area"})


def _emit_attrs(attrs: dict[str, str]) -> str:
    if not attrs:
        return ""
    parts = [f' {name}="{html_escape.escape(value, quote=True)}"' for name, value in sorted(attrs.items())]
    return "".join(parts)


def serialize_stripped(node: StrippedNode) -> str:
    attrs = dict(node.retained_attributes)
    if node.data_clickable:
        attrs["data-clickable"] = "true"
    if node.data_maybe_hoverable:
        attrs["data-maybe-hoverable"] = "true"
    if node.semantic_id is not None:
        attrs["data-semantic-id"] = node.semantic_id

    open_tag = f"<{node.tag}{_emit_attrs(attrs)}"
    if node.tag in VOID_TAGS and not node.children and not node.text:
        return open_tag + " />"
    inner = html_escape.escape(node.text) if node.text else ""
    inner += "".join(serialize_stripped(child) for child in node.children)
    return f"{open_tag}>{inner}</{node.tag}>"


def serialize_raw_html(snapshot: RawDomSnapshot) -> str:
    """Plain HTML rendering of the unfiltered tree, used as the size baseline."""

    def emit(node: RawNode) -> str:
        open_tag = f"<{node.tag}{_emit_attrs(node.attributes)}"
        if node.tag in VOID_TAGS and not node.children and not node.text:
            return open_tag + " />"
        inner = html_escape.escape(node.text) if node.text else ""
        inner += "".join(emit(child) for child in node.children)
        return f"{open_tag}>{inner}</{node.tag}>"

    return emit(snapshot.root)


class _StrippedHtmlParser(HTMLParser):
    def __init__(self, annotated: bool = True) -> None:
        super().__init__(convert_charrefs=True)
        self.annotated = annotated
        self.roots: list[RawNode] = []
        self._stack: list[RawNode] = []

    def _open(self, tag: str, attrs: list[tuple[str, str | None]], self_closing: bool) -> None:
        attributes = {name.lower(): (value or "") for name, value in attrs}
        flags: set[str] = set()
        if attributes.pop("data-clickable", None) == "true" and self.annotated:
            flags.add(CLICK_LISTENER)
        # The hover mark is how instrumented pages carry listener knowledge,
        # so it folds into flags in both parse modes.
        if attributes.pop("data-maybe-hoverable", None) == "true":
            flags.add(HOVER_LISTENER)
        attributes.pop("data-semantic-id", None)

        style = {"pointer-events": "auto"}
        if (
            self.annotated
            and _native_clickable_shape(tag, attributes)
            and CLICK_LISTENER not in flags
            and "disabled" not in attributes
        ):
            # A natively clickable tag without the annotation must have been
            # suppressed at capture time; recreate the suppression.
            style["pointer-events"] = "none"

        node = RawNode(
            tag=tag.lower(),
            attributes=attributes,
            computed_style=style,
            box=Box(0.0, 0.0, 1.0, 1.0),
            listener_flags=flags,
        )
        if self._stack:
            self._stack[-1].children.append(node)
        else:
            self.roots.append(node)
        if not self_closing and tag.lower() not in VOID_TAGS:
            self._stack.append(node)

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        self._open(tag, attrs, self_closing=False)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        self._open(tag, attrs, self_closing=True)

    def handle_endtag(self, tag: str) -> None:
        for i in range(len(self._stack) - 1, -1, -1):
            if self._stack[i].tag == tag.lower():
                del self._stack[i:]
                return

    def handle_data(self, data: str) -> None:
        if not self._stack or not data.strip():
            return
        node = self._stack[-1]
        node.text = f"{node.text} {data}" if node.text else data


def _native_clickable_shape(tag: str, attributes: dict[str, str]) -> bool:
    tag = tag.lower()
    if tag in _NATIVE_SHAPE_TAGS:
        return True
    if tag == "a" and "href" in attributes:
        return True
    return attributes.get("role") in ("button", "link")


def parse_stripped_html(html: str, url: str = "") -> RawDomSnapshot:
    """Re-parse a serialized observation into a snapshot for recompilation."""
    return _parse(html, url, annotated=True)


def parse_plain_html(html: str, url: str = "") -> RawDomSnapshot:
    """Parse ordinary page HTML (no pipeline annotations) into a snapshot.

    Geometry and computed style are unknown to a plain parse, so every
    element gets a nominal visible box. Used by the scripted test browser.
    """
    return _parse(html, url, annotated=False)


def _parse(html: str, url: str, annotated: bool) -> RawDomSnapshot:
    parser = _StrippedHtmlParser(annotated=annotated)
    parser.feed(html)
    parser.close()
    if len(parser.roots) == 1:
        root = parser.roots[0]
    else:
        root = RawNode(tag="html", box=Box(0.0, 0.0, 1.0, 1.0), children=parser.roots)
    return RawDomSnapshot(root=root, url=url)
