// Step-through model over a loaded trajectory. Cursor k shows observation k
// with the action the agent chose there (recorded on entry k+1) overlaid,
// so the highlighted target always exists in the rendered state.

import type { Trajectory, TrajectoryEntry, WireAction } from "./types.js";

export type RenderMode = "recorded" | "live";

export class ReplayView {
  readonly trajectory: Trajectory;
  readonly mode: RenderMode;
  cursor = 0;

  constructor(trajectory: Trajectory, mode: RenderMode = "recorded") {
    this.trajectory = trajectory;
    this.mode = mode;
  }

  get stateCount(): number {
    return this.trajectory.entries.length;
  }

  current(): TrajectoryEntry {
    return this.trajectory.entries[this.cursor];
  }

  /** The action taken from the current state; null at the final state. */
  actionAtCursor(): WireAction | null {
    const next = this.trajectory.entries[this.cursor + 1];
    return next ? next.action : null;
  }

  /** Oversight verdict attached to the action taken from the current state. */
  verdictAtCursor(): string | null {
    const next = this.trajectory.entries[this.cursor + 1];
    return next ? next.verdict : null;
  }

  stepForward(): this {
    this.cursor = Math.min(this.cursor + 1, this.stateCount - 1);
    return this;
  }

  stepBack(): this {
    this.cursor = Math.max(this.cursor - 1, 0);
    return this;
  }
}
