import type { MatchIndexJson, RallyRecordJson, TagName } from "../src/types.js";

let nextFrame = 0;

export function rally(
  rally_id: number,
  set_no: number,
  game_no: number,
  point_no: number,
  opts: { tags?: TagName[]; score?: string; span?: [number, number] } = {},
): RallyRecordJson {
  const [start, end] = opts.span ?? [nextFrame + 30, nextFrame + 120];
  nextFrame = end;
  return {
    rally_id,
    start_frame: start,
    end_frame: end,
    score: opts.score ?? "0-0-0|0-0-0",
    set_no,
    game_no,
    point_no,
    tags: opts.tags ?? [],
    bbox: null,
    flagged: false,
  };
}

export function resetFrames(): void {
  nextFrame = 0;
}

/** A small match: set 1 with two games, a fault pair, and a deuce. */
export function demoIndex(): MatchIndexJson {
  resetFrames();
  return {
    match_id: "demo",
    format: { best_of: 5 },
    fps: 30,
    rallies: [
      rally(0, 1, 1, 1),
      rally(1, 1, 1, 1, { tags: ["fault"] }),
      rally(2, 1, 1, 2, { score: "0-0-15|0-0-0" }),
      rally(3, 1, 1, 3, { tags: ["deuce"], score: "0-0-40|0-0-40" }),
      rally(4, 1, 2, 1, { score: "0-1-0|0-0-0" }),
      rally(5, 1, 2, 2, { tags: ["advantage"], score: "0-1-AD|0-0-40" }),
      rally(6, 2, 1, 1, { score: "1-0-0|0-0-0" }),
    ],
  };
}
