import { describe, expect, it } from "vitest";

import {
  applyIndex,
  beginMatchLoad,
  canNextPoint,
  canPrevPoint,
  initialState,
  nextGame,
  nextPoint,
  nextSet,
  prevPoint,
  selectPoint,
  selectRally,
  toggleTag,
  visibleRallies,
  withMatches,
} from "../src/state.js";
import { demoIndex } from "./fixtures.js";

function loaded() {
  const index = demoIndex();
  let state = beginMatchLoad(initialState, "demo");
  state = applyIndex(state, state.generation, index);
  return { state, index };
}

describe("match loading", () => {
  it("stores the match list", () => {
    const state = withMatches(initialState, [
      { match_id: "m1", rallies: 3, format: { best_of: 5 } },
    ]);
    expect(state.matches).toHaveLength(1);
  });

  it("applies an index for the current generation", () => {
    const { state } = loaded();
    expect(state.index?.match_id).toBe("demo");
  });

  it("discards stale responses by generation", () => {
    const index = demoIndex();
    let state = beginMatchLoad(initialState, "demo");
    const staleGen = state.generation;
    state = beginMatchLoad(state, "demo"); // user clicked again
    const applied = applyIndex(state, staleGen, index);
    expect(applied.index).toBeNull();
  });

  it("discards responses for a different match", () => {
    let state = beginMatchLoad(initialState, "other");
    state = applyIndex(state, state.generation, demoIndex());
    expect(state.index).toBeNull();
  });
});

describe("tag filters", () => {
  it("toggles on and off", () => {
    let state = toggleTag(initialState, "deuce");
    expect(state.tagFilters.has("deuce")).toBe(true);
    state = toggleTag(state, "deuce");
    expect(state.tagFilters.has("deuce")).toBe(false);
  });

  it("narrows visible rallies; empty filter shows all", () => {
    const { state } = loaded();
    expect(visibleRallies(state)).toHaveLength(7);
    const filtered = toggleTag(state, "deuce");
    expect(visibleRallies(filtered).map((r) => r.rally_id)).toEqual([3]);
    const both = toggleTag(filtered, "fault");
    expect(visibleRallies(both).map((r) => r.rally_id)).toEqual([1, 3]);
  });
});

describe("point selection", () => {
  it("selects a point and moves the cursor to its first rally", () => {
    const { state, index } = loaded();
    const sel = selectPoint(state, { set_no: 1, game_no: 1, point_no: 1 });
    expect(sel.selection).toEqual({ set_no: 1, game_no: 1, point_no: 1 });
    expect(sel.cursor).toBe(index.rallies[0]!.start_frame);
  });

  it("clears selection for unknown coordinates", () => {
    const { state } = loaded();
    const sel = selectPoint(state, { set_no: 9, game_no: 9, point_no: 9 });
    expect(sel.selection).toBeNull();
  });

  it("selectRally adopts that rally's coordinates", () => {
    const { state } = loaded();
    const sel = selectRally(state, 5);
    expect(sel.selection).toEqual({ set_no: 1, game_no: 2, point_no: 2 });
  });
});

describe("cursor navigation", () => {
  it("next point skips over the fault duplicate to the next distinct point", () => {
    const { state } = loaded();
    let s = selectPoint(state, { set_no: 1, game_no: 1, point_no: 1 });
    s = nextPoint(s);
    expect(s.selection).toEqual({ set_no: 1, game_no: 1, point_no: 2 });
  });

  it("walks rally order across games and sets", () => {
    const { state } = loaded();
    let s = selectPoint(state, { set_no: 1, game_no: 1, point_no: 3 });
    s = nextPoint(s);
    expect(s.selection).toEqual({ set_no: 1, game_no: 2, point_no: 1 });
  });

  it("prev point steps back in rally order", () => {
    const { state } = loaded();
    let s = selectPoint(state, { set_no: 1, game_no: 2, point_no: 1 });
    s = prevPoint(s);
    expect(s.selection).toEqual({ set_no: 1, game_no: 1, point_no: 3 });
  });

  it("next point from the last rally is disabled", () => {
    const { state } = loaded();
    const s = selectPoint(state, { set_no: 2, game_no: 1, point_no: 1 });
    expect(canNextPoint(s)).toBe(false);
    expect(nextPoint(s)).toBe(s);
  });

  it("prev point from the first rally is disabled", () => {
    const { state } = loaded();
    const s = selectPoint(state, { set_no: 1, game_no: 1, point_no: 1 });
    expect(canPrevPoint(s)).toBe(false);
  });

  it("next game and next set jump to the first rally there", () => {
    const { state } = loaded();
    let s = selectPoint(state, { set_no: 1, game_no: 1, point_no: 1 });
    const g = nextGame(s);
    expect(g.selection).toEqual({ set_no: 1, game_no: 2, point_no: 1 });
    const set = nextSet(s);
    expect(set.selection).toEqual({ set_no: 2, game_no: 1, point_no: 1 });
  });
});
