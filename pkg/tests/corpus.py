"""Fixture page corpus for the parser suites.

Every page embeds noise that must never survive compilation: excluded tags,
CSS-hidden nodes, zero-size boxes, and far-off-extent nodes. Each such node
carries the text marker ``ZZDROP`` so its absence is greppable in output.
"""

from __future__ import annotations

from webenv.obs.types import Box, RawDomSnapshot, RawNode

DROP_MARKER = "ZZDROP"

_FAKE_JS = "function init(){document.querySelectorAll('.x').forEach(function(n){n.dataset.v='1';});}" * 3
_FAKE_CSS = ".card{display:flex;padding:12px;border:1px solid #ddd}.hidden{display:none}" * 3


def el(
    tag: str,
    *children: RawNode,
    text: str | None = None,
    attrs: dict[str, str] | None = None,
    style: dict[str, str] | None = None,
    box: tuple[float, float, float, float] = (0, 0, 100, 20),
    listeners: tuple[str, ...] = (),
    scrollable: bool = False,
) -> RawNode:
    return RawNode(
        tag=tag,
        attributes=dict(attrs or {}),
        text=text,
        computed_style=dict(style or {}),
        box=Box(*box),
        scrollable=scrollable,
        listener_flags=set(listeners),
        children=list(children),
    )


def noise_nodes() -> list[RawNode]:
    """One of each node class the filter must remove."""
    return [
        el("script", text=_FAKE_JS + DROP_MARKER, box=(0, 0, 0, 0)),
        el("style", text=_FAKE_CSS + DROP_MARKER, box=(0, 0, 0, 0)),
        el("noscript", text=DROP_MARKER + " enable javascript", box=(0, 0, 0, 0)),
        el("template", el("div", text=DROP_MARKER + " row template"), box=(0, 0, 0, 0)),
        el("div", text=DROP_MARKER + " display none", style={"display": "none"}, box=(0, 0, 200, 50)),
        el("div", text=DROP_MARKER + " vis hidden", style={"visibility": "hidden"}, box=(0, 50, 200, 50)),
        el("div", text=DROP_MARKER + " transparent", style={"opacity": "0"}, box=(0, 100, 200, 50)),
        el("span", text=DROP_MARKER + " zero size", box=(5, 5, 0, 0)),
        el("div", text=DROP_MARKER + " parked offscreen", box=(-99999, -99999, 300, 300)),
    ]


def page(
    *body_children: RawNode,
    title: str = "Fixture",
    url: str = "http://fixture.test/",
    width: int = 1280,
    height: int = 720,
    page_height: float = 900,
    with_noise: bool = True,
) -> RawDomSnapshot:
    head = el(
        "head",
        el("title", text=title, box=(0, 0, 0, 0)),
        el("meta", attrs={"charset": "utf-8"}, box=(0, 0, 0, 0)),
        el("link", attrs={"rel": "stylesheet", "href": "/app.css"}, box=(0, 0, 0, 0)),
        el("style", text=_FAKE_CSS, box=(0, 0, 0, 0)),
        box=(0, 0, 0, 0),
    )
    children = list(body_children)
    if with_noise:
        children.extend(noise_nodes())
    body = el("body", *children, box=(0, 0, float(width), page_height))
    root = el("html", head, body, box=(0, 0, float(width), page_height))
    return RawDomSnapshot(root=root, viewport_width=width, viewport_height=height, url=url)


def login_page() -> RawDomSnapshot:
    form = el(
        "form",
        el("label", text="Email", attrs={"for": "email"}, box=(40, 40, 80, 20)),
        el("input", attrs={"type": "email", "id": "email", "placeholder": "Email address", "value": ""}, box=(40, 64, 240, 28)),
        el("label", text="Password", attrs={"for": "password"}, box=(40, 100, 80, 20)),
        el("input", attrs={"type": "password", "id": "password", "placeholder": "Password", "value": ""}, box=(40, 124, 240, 28)),
        el("button", attrs={"type": "submit", "aria-label": "Login button"}, box=(40, 164, 120, 32), style={"cursor": "pointer"}),
        attrs={"id": "login-form"},
        box=(30, 30, 300, 200),
    )
    hidden_error = el("div", text=DROP_MARKER + " bad credentials", style={"display": "none"}, attrs={"id": "error"}, box=(40, 200, 240, 20))
    return page(el("h1", text="Sign in", box=(40, 0, 200, 30)), form, hidden_error, title="Login", url="http://fixture.test/login")


def empty_page() -> RawDomSnapshot:
    body = el("body", box=(0, 0, 1280, 720))
    root = el("html", body, box=(0, 0, 1280, 720))
    return RawDomSnapshot(root=root, url="http://fixture.test/empty")


def select_color_page() -> RawDomSnapshot:
    select = el(
        "select",
        el("option", text="Red", attrs={"value": "red"}, box=(0, 0, 0, 0)),
        el("option", text="Blue", attrs={"value": "blue", "selected": ""}, box=(0, 0, 0, 0)),
        attrs={"name": "color", "value": "blue"},
        box=(40, 40, 160, 28),
    )
    return page(el("label", text="Pick a color", box=(40, 10, 120, 20)), select, title="Colors")


def article_page() -> RawDomSnapshot:
    nav = el(
        "nav",
        el("a", text="Home", attrs={"href": "/"}, style={"cursor": "pointer"}, box=(10, 10, 60, 20)),
        el("a", text="Archive", attrs={"href": "/archive"}, style={"cursor": "pointer"}, box=(80, 10, 60, 20)),
        el("a", text="About", attrs={"href": "/about"}, style={"cursor": "pointer"}, box=(150, 10, 60, 20)),
        box=(0, 0, 1280, 40),
    )
    article = el(
        "article",
        el("h1", text="Compact observations for web agents", box=(40, 60, 800, 36)),
        el("p", text="  Pages carry far more markup than meaning. ", box=(40, 110, 800, 60)),
        el("p", text="Stripping invisible nodes keeps the context small.", box=(40, 180, 800, 60)),
        el("p", text="Semantic identifiers make actions robust to DOM churn.", box=(40, 250, 800, 60)),
        box=(40, 60, 800, 400),
    )
    return page(nav, article, title="Field notes", url="http://fixture.test/article")


def spa_feed_page() -> RawDomSnapshot:
    items = [el("li", text=f"Feed item {i}", box=(40, 100 + 30 * i, 400, 24)) for i in range(1, 4)]
    feed = el("ul", *items, attrs={"id": "feed"}, box=(40, 100, 400, 120))
    load_more = el("button", text="Load more", attrs={"id": "load-more"}, style={"cursor": "pointer"}, box=(40, 240, 120, 32))
    return page(el("h1", text="Feed", box=(40, 40, 200, 32)), feed, load_more, title="Feed", url="http://fixture.test/feed")


def form_inputs_page() -> RawDomSnapshot:
    form = el(
        "form",
        el("input", attrs={"type": "text", "name": "q", "placeholder": "Search products", "value": "mug"}, box=(40, 40, 240, 28)),
        el("input", attrs={"type": "number", "name": "qty", "value": "42"}, box=(40, 80, 80, 28)),
        el("input", attrs={"type": "text", "name": "sku", "value": "A-17", "readonly": ""}, box=(40, 120, 120, 28)),
        el("input", attrs={"type": "checkbox", "name": "gift", "checked": ""}, box=(40, 160, 16, 16)),
        el("label", text="Gift wrap", attrs={"for": "gift"}, box=(60, 160, 80, 16)),
        el("textarea", attrs={"name": "notes", "value": "leave at door"}, box=(40, 190, 240, 60)),
        el("button", text="Submit order", attrs={"type": "submit"}, style={"cursor": "pointer"}, box=(40, 260, 130, 32)),
        attrs={"id": "order"},
        box=(30, 30, 320, 280),
    )
    return page(form, title="Order form", url="http://fixture.test/order")


def hover_menu_page() -> RawDomSnapshot:
    menu = el(
        "ul",
        el("li", text="Products", listeners=("hover",), style={"cursor": "pointer"}, box=(10, 10, 90, 24)),
        el("li", text="Solutions", listeners=("hover",), style={"cursor": "pointer"}, box=(110, 10, 90, 24)),
        el("li", text="Pricing", attrs={"data-maybe-hoverable": "true"}, style={"cursor": "pointer"}, box=(210, 10, 90, 24)),
        attrs={"id": "top-menu"},
        box=(0, 0, 400, 40),
    )
    dropdown = el(
        "div",
        el("a", text="Dropdown entry", attrs={"href": "/entry"}, box=(10, 40, 120, 20)),
        attrs={"id": "dropdown", "aria-hidden": "false"},
        box=(10, 40, 150, 30),
    )
    return page(menu, dropdown, title="Menus")


def product_grid_page() -> RawDomSnapshot:
    def card(section_id: str, name: str, y: float) -> RawNode:
        return el(
            "section",
            el("h2", text=name, box=(40, y, 200, 24)),
            el("span", text="$19.99", box=(40, y + 30, 60, 18)),
            el("button", text="Add to Cart", style={"cursor": "pointer"}, box=(40, y + 56, 110, 30)),
            attrs={"id": section_id},
            box=(30, y - 10, 400, 110),
        )

    return page(
        card("electronics", "USB hub", 60),
        card("books", "Field guide", 180),
        card("garden", "Seed kit", 300),
        title="Catalog",
        url="http://fixture.test/catalog",
    )


def offscreen_page() -> RawDomSnapshot:
    below_fold = el("p", text="Visible after scrolling", box=(40, 1500, 300, 24))
    parked = el("div", text=DROP_MARKER + " parked widget", box=(-5000, 100, 200, 100))
    sidebar = el(
        "aside",
        el("p", text="Long sidebar content", box=(1240, 40, 200, 24)),
        scrollable=True,
        box=(1240, 40, 200, 3000),
    )
    return page(el("p", text="Above the fold", box=(40, 40, 300, 24)), below_fold, parked, sidebar, page_height=2000, title="Scroll")


def nav_links_page() -> RawDomSnapshot:
    return page(
        el("a", text="Docs", attrs={"href": "/docs"}, box=(10, 10, 60, 20)),
        el("a", text="No destination", box=(80, 10, 110, 20)),
        el("a", text="Ghost link", attrs={"href": "/ghost"}, style={"pointer-events": "none"}, box=(200, 10, 90, 20)),
        el("a", text="Careers", attrs={"href": "/careers"}, box=(300, 10, 70, 20)),
        title="Links",
    )


def data_table_page() -> RawDomSnapshot:
    def row(i: int) -> RawNode:
        y = 60 + i * 36
        return el(
            "tr",
            el("td", text=f"Record {i}", box=(40, y, 120, 30)),
            el("td", el("button", text="Edit", style={"cursor": "pointer"}, box=(170, y, 50, 26)), box=(170, y, 60, 30)),
            el("td", el("button", text="Delete", style={"cursor": "pointer"}, box=(240, y, 60, 26)), box=(240, y, 70, 30)),
            box=(40, y, 300, 32),
        )

    table = el("table", el("tbody", *[row(i) for i in range(1, 4)], box=(40, 60, 320, 120)), box=(40, 60, 320, 130))
    return page(el("h1", text="Records", box=(40, 20, 160, 28)), table, title="Admin table")


def checkbox_form_page() -> RawDomSnapshot:
    return page(
        el("input", attrs={"type": "checkbox", "id": "opt-in", "name": "opt-in"}, box=(40, 40, 16, 16)),
        el("label", text="Email me updates", attrs={"for": "opt-in"}, box=(64, 40, 160, 16)),
        el("input", attrs={"type": "radio", "id": "plan-a", "name": "plan", "checked": ""}, box=(40, 70, 16, 16)),
        el("label", text="Plan A", attrs={"for": "plan-a"}, box=(64, 70, 80, 16)),
        el("input", attrs={"type": "radio", "id": "plan-b", "name": "plan"}, box=(40, 100, 16, 16)),
        el("label", text="Plan B", attrs={"for": "plan-b"}, box=(64, 100, 80, 16)),
        title="Preferences",
    )


def editor_page() -> RawDomSnapshot:
    textarea = el(
        "textarea",
        attrs={
            "name": "draft",
            "value": "abcdef",
            "data-focused": "true",
            "data-selection-start": "3",
            "data-selection-end": "3",
        },
        box=(40, 40, 400, 120),
    )
    region = el(
        "div",
        text="Editable region copy",
        attrs={"contenteditable": "true", "aria-label": "Notes editor"},
        box=(40, 180, 400, 80),
    )
    return page(textarea, region, title="Editor")


def multi_select_page() -> RawDomSnapshot:
    select = el(
        "select",
        el("option", text="Alpha", attrs={"value": "a", "selected": ""}, box=(0, 0, 0, 0)),
        el("option", text="Beta", attrs={"value": "b"}, box=(0, 0, 0, 0)),
        el("option", text="Gamma", attrs={"value": "c", "selected": ""}, box=(0, 0, 0, 0)),
        attrs={"name": "tags", "multiple": ""},
        box=(40, 40, 160, 80),
    )
    return page(select, title="Tags")


def disabled_controls_page() -> RawDomSnapshot:
    return page(
        el("button", text="Unavailable", attrs={"disabled": ""}, box=(40, 40, 110, 30)),
        el("input", attrs={"type": "text", "name": "frozen", "value": "n/a", "disabled": ""}, box=(40, 80, 200, 28)),
        el("select", el("option", text="Only", box=(0, 0, 0, 0)), attrs={"name": "locked", "disabled": ""}, box=(40, 120, 160, 28)),
        el("button", text="Available", style={"cursor": "pointer"}, box=(40, 160, 110, 30)),
        title="Disabled states",
    )


def aria_widgets_page() -> RawDomSnapshot:
    return page(
        el("div", text="Open dialog", attrs={"role": "button", "aria-haspopup": "dialog"}, box=(40, 40, 110, 28)),
        el("span", text="Skip to content", attrs={"role": "link"}, box=(40, 80, 130, 20)),
        el("div", text="Plain container", attrs={"aria-live": "polite"}, box=(40, 120, 200, 20)),
        title="ARIA widgets",
    )


def div_chain_page() -> RawDomSnapshot:
    deep_button = el("button", text="Buried action", style={"cursor": "pointer"}, box=(40, 40, 120, 30))
    chain = el("div", el("div", el("div", deep_button, box=(30, 30, 200, 50)), box=(20, 20, 220, 70)), box=(10, 10, 240, 90))
    kept_wrapper = el("div", el("p", text="Wrapped copy", box=(40, 140, 200, 20)), attrs={"id": "keep-me"}, box=(30, 130, 220, 40))
    empty_spans = el("div", el("span", box=(0, 0, 10, 10)), el("span", box=(12, 0, 10, 10)), el("p", text="Survivor", box=(40, 200, 100, 20)), box=(30, 190, 240, 40))
    return page(chain, kept_wrapper, empty_spans, title="Wrappers")


def unicode_labels_page() -> RawDomSnapshot:
    return page(
        el("button", text="Résumé upload", style={"cursor": "pointer"}, box=(40, 40, 130, 28)),
        el("button", text="日本語", style={"cursor": "pointer"}, box=(40, 80, 90, 28)),
        el("button", text="Café ☕ menu", style={"cursor": "pointer"}, box=(40, 120, 110, 28)),
        title="Unicode",
    )


def invisible_mix_page() -> RawDomSnapshot:
    return page(
        el("p", text="The only visible line", box=(40, 40, 300, 20)),
        el("button", text=DROP_MARKER + " invisible buy", style={"opacity": "0"}, box=(40, 80, 100, 30)),
        el("input", attrs={"type": "hidden", "name": "csrf", "value": DROP_MARKER}, box=(0, 0, 0, 0)),
        title="Invisible mix",
    )


def media_page() -> RawDomSnapshot:
    return page(
        el("video", attrs={"src": "/v.mp4", "controls": ""}, text=DROP_MARKER, box=(40, 40, 640, 360)),
        el("audio", attrs={"src": "/a.mp3"}, text=DROP_MARKER, box=(40, 420, 300, 40)),
        el("canvas", attrs={"id": "chart"}, text=DROP_MARKER, box=(40, 480, 400, 200)),
        el("iframe", attrs={"src": "http://ads.test/frame"}, text=DROP_MARKER, box=(700, 40, 300, 250)),
        el("img", attrs={"src": "/logo.png", "alt": "Company logo"}, box=(40, 700, 120, 40)),
        page_height=1200,
        title="Media",
    )


def long_labels_page() -> RawDomSnapshot:
    return page(
        el(
            "button",
            text="Download the comprehensive quarterly financial report for stakeholders",
            style={"cursor": "pointer"},
            box=(40, 40, 500, 30),
        ),
        el("a", text="Short", attrs={"href": "/s"}, box=(40, 90, 60, 20)),
        title="Long labels",
    )


def kitchen_sink_page() -> RawDomSnapshot:
    search = el(
        "div",
        el("input", attrs={"type": "search", "placeholder": "Search docs", "value": ""}, box=(40, 40, 220, 28)),
        el("button", text="Go", style={"cursor": "pointer"}, box=(270, 40, 40, 28)),
        attrs={"id": "search-bar", "data-region": "header"},
        box=(30, 30, 300, 50),
    )
    widgets = el(
        "div",
        el("span", text="Custom control", attrs={"tabindex": "0"}, listeners=("click",), box=(40, 100, 120, 24)),
        el("div", text="Pointer target", style={"cursor": "pointer"}, box=(40, 130, 120, 24)),
        el("summary", text="Details toggle", box=(40, 160, 120, 24)),
        attrs={"id": "widgets"},
        box=(30, 90, 300, 110),
    )
    return page(search, widgets, title="Kitchen sink")


def build_corpus() -> dict[str, RawDomSnapshot]:
    builders = {
        "login": login_page,
        "empty": empty_page,
        "select_color": select_color_page,
        "article": article_page,
        "spa_feed": spa_feed_page,
        "form_inputs": form_inputs_page,
        "hover_menu": hover_menu_page,
        "product_grid": product_grid_page,
        "offscreen": offscreen_page,
        "nav_links": nav_links_page,
        "data_table": data_table_page,
        "checkbox_form": checkbox_form_page,
        "editor": editor_page,
        "multi_select": multi_select_page,
        "disabled_controls": disabled_controls_page,
        "aria_widgets": aria_widgets_page,
        "div_chains": div_chain_page,
        "unicode_labels": unicode_labels_page,
        "invisible_mix": invisible_mix_page,
        "media": media_page,
        "long_labels": long_labels_page,
        "kitchen_sink": kitchen_sink_page,
    }
    return {name: build() for name, build in builders.items()}
