// Render recorded observations and highlight action targets.
//
// Observations are rendered from stripped_html, which has scripts, styles,
// and event handlers removed by construction upstream; the container is
// display-only and never written back to the trajectory.

import type { ReplayView } from "./replay.js";
import { actionTarget, type Observation, type TrajectoryEntry, type WireAction } from "./types.js";

export const HIGHLIGHT_CLASS = "webenv-highlight";
const HIGHLIGHT_STYLE = "outline: 3px solid #f59e0b; outline-offset: 2px; background: rgba(245,158,11,.15);";

export function renderObservation(container: HTMLElement, state: { observation: Observation }): void {
  container.innerHTML = state.observation.html;
}

export function clearHighlight(container: HTMLElement): void {
  for (const el of Array.from(container.querySelectorAll(`.${HIGHLIGHT_CLASS}`))) {
    el.classList.remove(HIGHLIGHT_CLASS);
    if (el.classList.length === 0) el.removeAttribute("class");
    (el as HTMLElement).style.cssText = "";
    if (el.getAttribute("style") === "") el.removeAttribute("style");
  }
}

/**
 * Outline exactly the node whose data-semantic-id equals the target.
 * Returns the highlighted element, or null when the action has no target.
 */
export function highlightTarget(container: HTMLElement, semanticId: string | null): HTMLElement | null {
  clearHighlight(container);
  if (semanticId === null) return null;
  const selector = `[data-semantic-id="${semanticId.replace(/"/g, '\\"')}"]`;
  const el = container.querySelector(selector) as HTMLElement | null;
  if (el) {
    el.classList.add(HIGHLIGHT_CLASS);
    el.style.cssText = HIGHLIGHT_STYLE;
  }
  return el;
}

export interface RenderedState {
  entry: TrajectoryEntry;
  action: WireAction | null;
  highlighted: HTMLElement | null;
}

/** Render the view's current state: observation plus the overlaid action. */
export function renderState(container: HTMLElement, view: ReplayView): RenderedState {
  const entry = view.current();
  const action = view.actionAtCursor();
  renderObservation(container, entry);
  const highlighted = highlightTarget(container, actionTarget(action));
  return { entry, action, highlighted };
}
