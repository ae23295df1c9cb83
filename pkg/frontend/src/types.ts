// Wire formats consumed from the episode service: observation JSON,
// action/1 objects, and trajectory/1 JSONL records.

export interface ClickableEntry {
  id: string;
  label: string;
}

export interface InputState {
  id: string;
  type: string;
  value: string;
  editable: boolean;
  focused: boolean;
  numeric_value?: number;
  selection?: [number, number];
}

export interface OptionState {
  id: string;
  text: string;
  value: string;
  selected: boolean;
}

export interface SelectState {
  id: string;
  value: string;
  selected_index: number;
  multiple: boolean;
  options: OptionState[];
}

export interface Observation {
  html: string;
  clickables: ClickableEntry[];
  hoverables: string[];
  inputs: InputState[];
  selects: SelectState[];
  url: string;
  title: string;
}

/** One action/1 object; variant-specific fields are optional. */
export interface WireAction {
  schema?: string;
  action: string;
  target?: string;
  option?: string;
  key?: string;
  text?: string;
  enter?: boolean;
  url?: string;
  index?: number;
  answer?: string;
}

export interface StepTiming {
  action_latency_s?: number;
  quiescence_wait_s?: number;
}

export interface TrajectoryEntry {
  index: number;
  status: string;
  digest: string;
  observation: Observation;
  action: WireAction | null;
  timing: StepTiming | null;
  verdict: string | null;
}

export interface TrajectoryHeader {
  schema: string;
  episode_id: string;
  task_id: string;
  status: string;
  answer: string | null;
  entries: number;
}

export interface Trajectory {
  header: TrajectoryHeader;
  entries: TrajectoryEntry[];
}

/** The semantic id an action operates on, when it has one. */
export function actionTarget(action: WireAction | null): string | null {
  if (!action) return null;
  return action.target ?? null;
}

/** Short human line for an action, e.g. `click add-to-cart`. */
export function describeAction(action: WireAction): string {
  const parts: string[] = [action.action];
  if (action.target) parts.push(action.target);
  if (action.option) parts.push(`→ ${action.option}`);
  if (action.key) parts.push(`[${action.key}]`);
  if (action.text !== undefined) parts.push(JSON.stringify(action.text));
  if (action.url) parts.push(action.url);
  if (action.index !== undefined) parts.push(`#${action.index}`);
  if (action.answer) parts.push(`answer=${JSON.stringify(action.answer)}`);
  return parts.join(" ");
}

/** Visible label for a semantic id, looked up across the observation lists. */
export function targetLabel(observation: Observation, semanticId: string): string {
  const clickable = observation.clickables.find((c) => c.id === semanticId);
  if (clickable && clickable.label) return clickable.label;
  const input = observation.inputs.find((i) => i.id === semanticId);
  if (input) return input.value || input.type;
  const select = observation.selects.find((s) => s.id === semanticId);
  if (select) return select.value || "select";
  return semanticId;
}
