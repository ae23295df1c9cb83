// trajectory/1 JSONL loading. Corrupted lines are reported, never thrown:
// the viewer shows an error banner and renders whatever parsed.

import type { Trajectory, TrajectoryEntry, TrajectoryHeader } from "./types.js";

export const TRAJECTORY_SCHEMA = "trajectory/1";

export interface ParseResult {
  trajectory: Trajectory | null;
  errors: string[];
}

function isEntry(value: unknown): value is TrajectoryEntry {
  if (typeof value !== "object" || value === null) return false;
  const entry = value as Record<string, unknown>;
  return (
    typeof entry.index === "number" &&
    typeof entry.digest === "string" &&
    typeof entry.observation === "object" &&
    entry.observation !== null &&
    typeof (entry.observation as Record<string, unknown>).html === "string"
  );
}

export function parseTrajectoryJsonl(text: string): ParseResult {
  const errors: string[] = [];
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    return { trajectory: null, errors: ["empty trajectory file"] };
  }

  let header: TrajectoryHeader;
  try {
    header = JSON.parse(lines[0]) as TrajectoryHeader;
  } catch {
    return { trajectory: null, errors: ["header line is not valid JSON"] };
  }
  if (header.schema !== TRAJECTORY_SCHEMA) {
    return { trajectory: null, errors: [`unsupported schema ${String(header.schema)}`] };
  }

  const entries: TrajectoryEntry[] = [];
  for (let i = 1; i < lines.length; i++) {
    let parsed: unknown;
    try {
      parsed = JSON.parse(lines[i]);
    } catch {
      errors.push(`line ${i + 1}: corrupted JSON, skipped`);
      continue;
    }
    if (!isEntry(parsed)) {
      errors.push(`line ${i + 1}: not a trajectory entry, skipped`);
      continue;
    }
    entries.push(parsed);
  }

  return { trajectory: { header, entries }, errors };
}
