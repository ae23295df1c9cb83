"""Hand-labeled clickability ground truth.

Each row is (case name, node, expected clickable). Labels were assigned by
hand from the interactivity rules: native controls (button, input, select,
summary, area), anchors with href, explicit click handlers, ARIA roles
button/link, and pointer cursor are clickable; a disabled attribute or
pointer-events:none excludes an element. Nothing else is clickable.
"""

from __future__ import annotations

from corpus import el

B = (0, 0, 100, 24)
PTR = {"cursor": "pointer"}
PE_NONE = {"pointer-events": "none"}
DIS = {"disabled": ""}

LABELED_ELEMENTS = [
    # -- native control tags ------------------------------------------------
    ("button", el("button", text="Go", box=B), True),
    ("input text", el("input", attrs={"type": "text"}, box=B), True),
    ("input checkbox", el("input", attrs={"type": "checkbox"}, box=B), True),
    ("input radio", el("input", attrs={"type": "radio"}, box=B), True),
    ("input submit", el("input", attrs={"type": "submit"}, box=B), True),
    ("input email", el("input", attrs={"type": "email"}, box=B), True),
    ("input number", el("input", attrs={"type": "number"}, box=B), True),
    ("input password", el("input", attrs={"type": "password"}, box=B), True),
    ("input range", el("input", attrs={"type": "range"}, box=B), True),
    ("input file", el("input", attrs={"type": "file"}, box=B), True),
    ("input date", el("input", attrs={"type": "date"}, box=B), True),
    ("select", el("select", box=B), True),
    ("select multiple", el("select", attrs={"multiple": ""}, box=B), True),
    ("summary", el("summary", text="More", box=B), True),
    ("area", el("area", box=B), True),
    ("area with href", el("area", attrs={"href": "/map"}, box=B), True),
    ("input readonly still clickable", el("input", attrs={"type": "text", "readonly": ""}, box=B), True),
    # -- native tags, disabled attribute ------------------------------------
    ("disabled button", el("button", text="Go", attrs=DIS, box=B), False),
    ("disabled input", el("input", attrs={"type": "text", **DIS}, box=B), False),
    ("disabled checkbox", el("input", attrs={"type": "checkbox", **DIS}, box=B), False),
    ("disabled select", el("select", attrs=DIS, box=B), False),
    ("disabled summary", el("summary", text="More", attrs=DIS, box=B), False),
    ("disabled area", el("area", attrs=DIS, box=B), False),
    ("disabled button with pointer cursor", el("button", text="Go", attrs=DIS, style=PTR, box=B), False),
    # -- native tags, pointer-events suppressed ------------------------------
    ("pe-none button", el("button", text="Go", style=PE_NONE, box=B), False),
    ("pe-none input", el("input", attrs={"type": "text"}, style=PE_NONE, box=B), False),
    ("pe-none select", el("select", style=PE_NONE, box=B), False),
    ("pe-none summary", el("summary", text="x", style=PE_NONE, box=B), False),
    ("pe-none area", el("area", style=PE_NONE, box=B), False),
    ("pe-none input submit", el("input", attrs={"type": "submit"}, style=PE_NONE, box=B), False),
    ("pe-none input radio", el("input", attrs={"type": "radio"}, style=PE_NONE, box=B), False),
    # -- anchors --------------------------------------------------------------
    ("anchor with href", el("a", text="Home", attrs={"href": "/"}, box=B), True),
    ("anchor with empty href", el("a", text="Top", attrs={"href": ""}, box=B), True),
    ("anchor without href", el("a", text="Placeholder", box=B), False),
    ("anchor href + text cursor", el("a", text="x", attrs={"href": "/x"}, style={"cursor": "text"}, box=B), True),
    ("anchor href pe-none", el("a", text="x", attrs={"href": "/x"}, style=PE_NONE, box=B), False),
    ("anchor href disabled attr", el("a", text="x", attrs={"href": "/x", **DIS}, box=B), False),
    ("anchor no href but onclick", el("a", text="x", attrs={"onclick": "f()"}, box=B), True),
    ("anchor no href role=link", el("a", text="x", attrs={"role": "link"}, box=B), True),
    # -- explicit click handlers ----------------------------------------------
    ("div onclick", el("div", text="x", attrs={"onclick": "f()"}, box=B), True),
    ("span onclick", el("span", text="x", attrs={"onclick": "f()"}, box=B), True),
    ("li onclick", el("li", text="x", attrs={"onclick": "f()"}, box=B), True),
    ("td onclick", el("td", text="x", attrs={"onclick": "f()"}, box=B), True),
    ("img onclick", el("img", attrs={"onclick": "f()", "alt": "pic"}, box=B), True),
    ("div onclick disabled", el("div", text="x", attrs={"onclick": "f()", **DIS}, box=B), False),
    ("div onclick pe-none", el("div", text="x", attrs={"onclick": "f()"}, style=PE_NONE, box=B), False),
    ("div click listener", el("div", text="x", listeners=("click",), box=B), True),
    ("span click listener", el("span", text="x", listeners=("click",), box=B), True),
    ("li click listener", el("li", text="x", listeners=("click",), box=B), True),
    ("p click listener", el("p", text="x", listeners=("click",), box=B), True),
    ("div click listener pe-none", el("div", text="x", listeners=("click",), style=PE_NONE, box=B), False),
    ("div click listener disabled", el("div", text="x", listeners=("click",), attrs=DIS, box=B), False),
    # -- ARIA roles -------------------------------------------------------------
    ("div role=button", el("div", text="x", attrs={"role": "button"}, box=B), True),
    ("span role=button", el("span", text="x", attrs={"role": "button"}, box=B), True),
    ("div role=link", el("div", text="x", attrs={"role": "link"}, box=B), True),
    ("span role=link", el("span", text="x", attrs={"role": "link"}, box=B), True),
    ("div role=button disabled", el("div", text="x", attrs={"role": "button", **DIS}, box=B), False),
    ("div role=link pe-none", el("div", text="x", attrs={"role": "link"}, style=PE_NONE, box=B), False),
    ("div role=checkbox", el("div", text="x", attrs={"role": "checkbox"}, box=B), False),
    ("div role=tab", el("div", text="x", attrs={"role": "tab"}, box=B), False),
    ("span role=menuitem", el("span", text="x", attrs={"role": "menuitem"}, box=B), False),
    ("div role=presentation", el("div", text="x", attrs={"role": "presentation"}, box=B), False),
    # -- pointer cursor ----------------------------------------------------------
    ("div pointer cursor", el("div", text="x", style=PTR, box=B), True),
    ("span pointer cursor", el("span", text="x", style=PTR, box=B), True),
    ("p pointer cursor", el("p", text="x", style=PTR, box=B), True),
    ("li pointer cursor", el("li", text="x", style=PTR, box=B), True),
    ("img pointer cursor", el("img", attrs={"alt": "pic"}, style=PTR, box=B), True),
    ("label pointer cursor", el("label", text="x", style=PTR, box=B), True),
    ("h2 pointer cursor", el("h2", text="x", style=PTR, box=B), True),
    ("div pointer cursor + hover listener", el("div", text="x", style=PTR, listeners=("hover",), box=B), True),
    ("div pointer cursor disabled", el("div", text="x", attrs=DIS, style=PTR, box=B), False),
    ("div pointer cursor pe-none", el("div", text="x", style={**PTR, **PE_NONE}, box=B), False),
    # -- non-pointer cursors -------------------------------------------------------
    ("div default cursor", el("div", text="x", style={"cursor": "default"}, box=B), False),
    ("div text cursor", el("div", text="x", style={"cursor": "text"}, box=B), False),
    ("span move cursor", el("span", text="x", style={"cursor": "move"}, box=B), False),
    ("div grab cursor", el("div", text="x", style={"cursor": "grab"}, box=B), False),
    ("p wait cursor", el("p", text="x", style={"cursor": "wait"}, box=B), False),
    # -- plain non-interactive elements ---------------------------------------------
    ("plain div", el("div", text="x", box=B), False),
    ("plain span", el("span", text="x", box=B), False),
    ("plain p", el("p", text="x", box=B), False),
    ("plain h1", el("h1", text="x", box=B), False),
    ("plain li", el("li", text="x", box=B), False),
    ("plain td", el("td", text="x", box=B), False),
    ("plain img", el("img", attrs={"alt": "pic"}, box=B), False),
    ("plain label", el("label", text="x", attrs={"for": "a"}, box=B), False),
    ("plain strong", el("strong", text="x", box=B), False),
    ("plain em", el("em", text="x", box=B), False),
    ("plain section", el("section", box=B), False),
    ("plain article", el("article", box=B), False),
    ("plain nav", el("nav", box=B), False),
    ("plain ul", el("ul", box=B), False),
    ("plain ol", el("ol", box=B), False),
    ("plain table", el("table", box=B), False),
    ("plain tr", el("tr", box=B), False),
    ("plain footer", el("footer", box=B), False),
    ("plain header", el("header", box=B), False),
    ("plain small", el("small", text="x", box=B), False),
    ("plain b", el("b", text="x", box=B), False),
    ("plain pre", el("pre", text="x", box=B), False),
    ("plain form", el("form", box=B), False),
    ("plain fieldset", el("fieldset", box=B), False),
    ("plain legend", el("legend", text="x", box=B), False),
    # -- signals that do NOT confer clickability ---------------------------------------
    ("hover listener only", el("li", text="x", listeners=("hover",), box=B), False),
    ("hover annotation only", el("div", text="x", attrs={"data-maybe-hoverable": "true"}, box=B), False),
    ("tabindex 0 div", el("div", text="x", attrs={"tabindex": "0"}, box=B), False),
    ("tabindex -1 span", el("span", text="x", attrs={"tabindex": "-1"}, box=B), False),
    ("aria-label only", el("div", text="x", attrs={"aria-label": "thing"}, box=B), False),
    ("data attribute only", el("div", text="x", attrs={"data-widget": "chip"}, box=B), False),
    ("onmouseover only", el("div", text="x", attrs={"onmouseover": "f()"}, box=B), False),
    # -- combinations -------------------------------------------------------------------
    ("button with pointer cursor", el("button", text="x", style=PTR, box=B), True),
    ("button with role=link", el("button", text="x", attrs={"role": "link"}, box=B), True),
    ("div role=button + onclick", el("div", text="x", attrs={"role": "button", "onclick": "f()"}, box=B), True),
    ("span role=link + pointer", el("span", text="x", attrs={"role": "link"}, style=PTR, box=B), True),
    ("div onclick + pointer", el("div", text="x", attrs={"onclick": "f()"}, style=PTR, box=B), True),
    ("textarea not native-clickable", el("textarea", box=B), False),
    ("textarea with pointer cursor", el("textarea", style=PTR, box=B), True),
    ("option plain", el("option", text="Red", box=B), False),
]
