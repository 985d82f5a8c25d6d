/** Timeline geometry: rally segments as blocks on a frame axis. */

import type { RallyRecordJson } from "./types.js";

export interface TimelineBlock {
  rally_id: number;
  left: number; // fraction of the axis, [0, 1]
  width: number; // fraction of the axis
  tags: string[];
  selected: boolean;
  score: string;
}

/** Lay visible rallies out on a 0..1 axis spanning the whole match. */
export function layoutTimeline(
  all: RallyRecordJson[],
  visible: RallyRecordJson[],
  selectedRallyIds: ReadonlySet<number>,
): TimelineBlock[] {
  if (all.length === 0) return [];
  const last = all[all.length - 1]!;
  const span = Math.max(last.end_frame, 1);
  return visible.map((r) => ({
    rally_id: r.rally_id,
    left: r.start_frame / span,
    width: Math.max((r.end_frame - r.start_frame) / span, 0.002),
    tags: r.tags,
    selected: selectedRallyIds.has(r.rally_id),
    score: r.score,
  }));
}
