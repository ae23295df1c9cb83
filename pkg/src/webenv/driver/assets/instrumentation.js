// Page-runtime instrumentation: request interception, hover-listener
// marking, and the snapshot collector. Installed before any page script
// runs; idempotent per document.
(() => {
  if (window.__webenv) return;

  const state = { events: [], capture: [], clickListeners: new WeakSet(), seq: 0 };
  const now = () => Date.now() / 1000;
  const emit = (kind, id) => { state.events.push({ kind: kind, id: id, t: now() }); };

  // fetch
  const origFetch = window.fetch;
  if (origFetch) {
    window.fetch = function () {
      const id = "f" + (++state.seq);
      emit("start", id);
      return origFetch.apply(this, arguments).then(
        (r) => { emit("end", id); return r; },
        (e) => { emit("end", id); throw e; }
      );
    };
  }

  // XMLHttpRequest
  const origSend = XMLHttpRequest.prototype.send;
  XMLHttpRequest.prototype.send = function () {
    const id = "x" + (++state.seq);
    emit("start", id);
    this.addEventListener("loadend", () => emit("end", id));
    return origSend.apply(this, arguments);
  };

  // addEventListener: mark hover targets, remember click listeners
  const origAdd = EventTarget.prototype.addEventListener;
  EventTarget.prototype.addEventListener = function (type) {
    if (this && this.setAttribute) {
      if (type === "mouseover" || type === "mouseenter") {
        try { this.setAttribute("data-maybe-hoverable", "true"); } catch (e) { /* non-element */ }
      } else if (type === "click") {
        state.clickListeners.add(this);
      }
    }
    return origAdd.apply(this, arguments);
  };

  function collect(el) {
    const style = getComputedStyle(el);
    const rect = el.getBoundingClientRect();
    const attrs = {};
    for (const a of el.attributes) attrs[a.name] = a.value;

    // write live control state into the attribute map
    if (el instanceof HTMLInputElement || el instanceof HTMLTextAreaElement) {
      attrs["value"] = el.value;
      if (el.checked) attrs["checked"] = ""; else delete attrs["checked"];
      if (document.activeElement === el) {
        attrs["data-focused"] = "true";
        try {
          if (el.selectionStart !== null && el.selectionStart !== undefined) {
            attrs["data-selection-start"] = String(el.selectionStart);
            attrs["data-selection-end"] = String(el.selectionEnd);
          }
        } catch (e) { /* number inputs throw on selectionStart */ }
      }
    }
    if (el instanceof HTMLSelectElement) attrs["value"] = el.value;
    if (el instanceof HTMLOptionElement) {
      if (el.selected) attrs["selected"] = ""; else delete attrs["selected"];
    }
    if (el.isContentEditable && document.activeElement === el) attrs["data-focused"] = "true";

    const listeners = [];
    if (el.onclick || state.clickListeners.has(el)) listeners.push("click");
    if (el.onmouseover || el.onmouseenter || attrs["data-maybe-hoverable"] === "true") listeners.push("hover");

    const index = state.capture.length;
    state.capture.push(el);
    const node = {
      tag: el.tagName.toLowerCase(),
      attributes: attrs,
      style: {
        display: style.display,
        visibility: style.visibility,
        opacity: style.opacity,
        cursor: style.cursor,
        "pointer-events": style.pointerEvents,
      },
      box: {
        x: rect.x + window.scrollX,
        y: rect.y + window.scrollY,
        width: rect.width,
        height: rect.height,
      },
      scrollable:
        el.scrollHeight > el.clientHeight + 1 || el.scrollWidth > el.clientWidth + 1,
      cap: index,
      children: [],
    };
    if (listeners.length) node.listeners = listeners;

    let text = "";
    for (const child of el.childNodes) {
      if (child.nodeType === Node.TEXT_NODE) text += child.textContent + " ";
      else if (child.nodeType === Node.ELEMENT_NODE) node.children.push(collect(child));
    }
    if (text.trim()) node.text = text;
    return node;
  }

  window.__webenv = {
    drainEvents() {
      const out = state.events;
      state.events = [];
      return out;
    },
    snapshot() {
      state.capture = [];
      return {
        schema: "raw-dom/1",
        url: location.href,
        viewport: { width: window.innerWidth, height: window.innerHeight },
        root: collect(document.documentElement),
      };
    },
    applyIds(mapping, clickableIds) {
      const clickable = new Set(clickableIds || []);
      for (const el of document.querySelectorAll("[data-semantic-id]")) {
        el.removeAttribute("data-semantic-id");
        el.removeAttribute("data-clickable");
      }
      for (const sid in mapping) {
        const el = state.capture[mapping[sid]];
        if (el) {
          el.setAttribute("data-semantic-id", sid);
          if (clickable.has(sid)) el.setAttribute("data-clickable", "true");
        }
      }
    },
    settle() {
      return new Promise((resolve) =>
        requestAnimationFrame(() => requestAnimationFrame(() => resolve(true)))
      );
    },
  };
})();
