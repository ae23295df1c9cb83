// Real-time oversight console: previews each pending action with its target
// highlighted in the rendered page, and carries the human verdict back to
// the service before anything executes.

import { EpisodeEventStream, ServiceClient } from "./api.js";
import { highlightTarget, renderObservation } from "./render.js";
import {
  actionTarget,
  describeAction,
  targetLabel,
  type Observation,
  type WireAction,
} from "./types.js";

export interface PendingActionCard {
  episodeId: string;
  action: WireAction;
  targetId: string | null;
  targetLabel: string | null;
  highlighted: boolean;
}

export interface ConsoleElements {
  page: HTMLElement; // rendered observation
  card: HTMLElement; // pending-action card (hidden unless an action is parked)
  banner: HTMLElement; // connection-loss banner
}

export class OversightConsole {
  readonly client: ServiceClient;
  readonly episodeId: string;
  readonly elements: ConsoleElements;
  stream: EpisodeEventStream;
  currentObservation: Observation | null = null;
  pending: PendingActionCard | null = null;

  constructor(
    client: ServiceClient,
    episodeId: string,
    elements: ConsoleElements,
    makeStream?: (handlers: ConstructorParameters<typeof EpisodeEventStream>[2]) => EpisodeEventStream,
  ) {
    this.client = client;
    this.episodeId = episodeId;
    this.elements = elements;
    const handlers = {
      onPendingAction: (action: WireAction) => this.showPending(action),
      onConnectionChange: (connected: boolean) => this.setConnected(connected),
      onClosed: () => this.setConnected(false),
    };
    this.stream = makeStream
      ? makeStream(handlers)
      : new EpisodeEventStream(client.baseUrl, episodeId, handlers);
    this.elements.card.hidden = true;
    this.elements.banner.hidden = true;
  }

  start(): void {
    this.stream.connect();
  }

  stop(): void {
    this.stream.close();
  }

  setObservation(observation: Observation): void {
    this.currentObservation = observation;
    renderObservation(this.elements.page, { observation });
  }

  setConnected(connected: boolean): void {
    this.elements.banner.hidden = connected;
    this.elements.banner.textContent = connected ? "" : "connection lost — retrying…";
  }

  showPending(action: WireAction): void {
    const targetId = actionTarget(action);
    const label =
      targetId && this.currentObservation ? targetLabel(this.currentObservation, targetId) : null;
    const highlighted = highlightTarget(this.elements.page, targetId) !== null;
    this.pending = {
      episodeId: this.episodeId,
      action,
      targetId,
      targetLabel: label,
      highlighted,
    };
    this.renderCard();
  }

  private renderCard(): void {
    const card = this.elements.card;
    if (!this.pending) {
      card.hidden = true;
      card.innerHTML = "";
      return;
    }
    card.hidden = false;
    card.innerHTML = "";
    const summary = document.createElement("p");
    summary.className = "pending-summary";
    summary.textContent = describeAction(this.pending.action);
    card.appendChild(summary);
    if (this.pending.targetLabel) {
      const label = document.createElement("p");
      label.className = "pending-target";
      label.textContent = `target: ${this.pending.targetLabel}`;
      card.appendChild(label);
    }
    const approve = document.createElement("button");
    approve.textContent = "Approve";
    approve.className = "approve";
    approve.addEventListener("click", () => void this.resolve("approve"));
    const reject = document.createElement("button");
    reject.textContent = "Reject";
    reject.className = "reject";
    reject.addEventListener("click", () => void this.resolve("reject"));
    card.appendChild(approve);
    card.appendChild(reject);
  }

  async resolve(verdict: "approve" | "reject"): Promise<void> {
    const response = await this.client.approve(this.episodeId, verdict);
    this.pending = null;
    this.renderCard();
    highlightTarget(this.elements.page, null);
    if (verdict === "approve" && response.outcome?.observation) {
      this.setObservation(response.outcome.observation);
    }
    // On reject the page keeps rendering the unchanged observation.
  }
}
