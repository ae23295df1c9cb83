// Page wiring for the replayer shell (index.html): load a trajectory file,
// step through states, and optionally attach the oversight console with
// ?service=<base-url>&episode=<id>.

import { ServiceClient } from "./api.js";
import { OversightConsole } from "./oversight.js";
import { renderState } from "./render.js";
import { ReplayView } from "./replay.js";
import { parseTrajectoryJsonl } from "./trajectory.js";
import { describeAction } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

let view: ReplayView | null = null;

function refresh(): void {
  const page = byId<HTMLElement>("page");
  const status = byId<HTMLElement>("status");
  const actionLine = byId<HTMLElement>("action");
  if (!view) {
    status.textContent = "no trajectory loaded";
    return;
  }
  const state = renderState(page, view);
  status.textContent = `state ${view.cursor + 1} / ${view.stateCount}  ·  ${state.entry.status}` +
    (state.entry.verdict ? `  ·  verdict: ${state.entry.verdict}` : "");
  actionLine.textContent = state.action ? `next action: ${describeAction(state.action)}` : "(end of trajectory)";
}

function showErrors(messages: string[]): void {
  const banner = byId<HTMLElement>("banner");
  banner.hidden = messages.length === 0;
  banner.textContent = messages.join(" · ");
}

function loadText(text: string): void {
  const { trajectory, errors } = parseTrajectoryJsonl(text);
  showErrors(errors);
  if (trajectory) {
    view = new ReplayView(trajectory);
    refresh();
  }
}

function wireReplay(): void {
  const input = byId<HTMLInputElement>("file");
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (!file) return;
    void file.text().then(loadText);
  });
  byId<HTMLButtonElement>("prev").addEventListener("click", () => {
    view?.stepBack();
    refresh();
  });
  byId<HTMLButtonElement>("next").addEventListener("click", () => {
    view?.stepForward();
    refresh();
  });
  document.addEventListener("keydown", (event) => {
    if (event.key === "ArrowLeft") view?.stepBack();
    else if (event.key === "ArrowRight") view?.stepForward();
    else return;
    refresh();
  });
}

function wireOversight(): void {
  const params = new URLSearchParams(location.search);
  const service = params.get("service");
  const episode = params.get("episode");
  if (!service || !episode) return;
  const client = new ServiceClient(service);
  const console_ = new OversightConsole(client, episode, {
    page: byId("page"),
    card: byId("card"),
    banner: byId("connection"),
  });
  void client.fetchTrajectory(episode).then((text) => {
    const { trajectory } = parseTrajectoryJsonl(text);
    const last = trajectory?.entries[trajectory.entries.length - 1];
    if (last) console_.setObservation(last.observation);
  });
  console_.start();
}

wireReplay();
wireOversight();
refresh();
