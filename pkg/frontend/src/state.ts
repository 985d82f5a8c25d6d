/** Navigator state and its pure transition functions.
 *
 * UI state is a pure function of API data plus user events: every
 * mutation here returns a fresh state object, and async responses are
 * guarded by a request generation counter so stale fetches are
 * discarded rather than applied.
 */

import type {
  MatchIndexJson,
  MatchSummary,
  PointCoords,
  RallyRecordJson,
  TagName,
} from "./types.js";

export interface NavState {
  matches: MatchSummary[];
  matchId: string | null;
  index: MatchIndexJson | null;
  selection: PointCoords | null;
  tagFilters: ReadonlySet<TagName>;
  cursor: number | null; // frame within the selected match
  generation: number; // request generation for stale-response discard
}

export const initialState: NavState = {
  matches: [],
  matchId: null,
  index: null,
  selection: null,
  tagFilters: new Set(),
  cursor: null,
  generation: 0,
};

export function withMatches(state: NavState, matches: MatchSummary[]): NavState {
  return { ...state, matches };
}

/** Start loading a match: bumps the generation and clears the view. */
export function beginMatchLoad(state: NavState, matchId: string): NavState {
  return {
    ...state,
    matchId,
    index: null,
    selection: null,
    cursor: null,
    generation: state.generation + 1,
  };
}

/** Apply a fetched index unless a newer request superseded it. */
export function applyIndex(
  state: NavState,
  generation: number,
  index: MatchIndexJson,
): NavState {
  if (generation !== state.generation || index.match_id !== state.matchId) {
    return state; // stale response
  }
  return { ...state, index };
}

export function toggleTag(state: NavState, tag: TagName): NavState {
  const tagFilters = new Set(state.tagFilters);
  if (tagFilters.has(tag)) {
    tagFilters.delete(tag);
  } else {
    tagFilters.add(tag);
  }
  return { ...state, tagFilters };
}

/** Rallies passing the active tag filters (no filters = everything). */
export function visibleRallies(state: NavState): RallyRecordJson[] {
  if (!state.index) return [];
  if (state.tagFilters.size === 0) return state.index.rallies;
  return state.index.rallies.filter((r) =>
    r.tags.some((t) => state.tagFilters.has(t)),
  );
}

export function recordsAt(
  state: NavState,
  coords: PointCoords,
): RallyRecordJson[] {
  if (!state.index) return [];
  return state.index.rallies.filter(
    (r) =>
      r.set_no === coords.set_no &&
      r.game_no === coords.game_no &&
      r.point_no === coords.point_no,
  );
}

export function selectPoint(state: NavState, coords: PointCoords): NavState {
  const records = recordsAt(state, coords);
  if (records.length === 0) {
    return { ...state, selection: null };
  }
  const first = records[0]!;
  return { ...state, selection: coords, cursor: first.start_frame };
}

export function selectRally(state: NavState, rallyId: number): NavState {
  const rally = state.index?.rallies.find((r) => r.rally_id === rallyId);
  if (!rally) return state;
  return {
    ...state,
    selection: {
      set_no: rally.set_no,
      game_no: rally.game_no,
      point_no: rally.point_no,
    },
    cursor: rally.start_frame,
  };
}

/** Index into rallies[] of the first record of the current selection. */
function selectedOrdinal(state: NavState): number {
  if (!state.index || !state.selection) return -1;
  const { set_no, game_no, point_no } = state.selection;
  return state.index.rallies.findIndex(
    (r) =>
      r.set_no === set_no && r.game_no === game_no && r.point_no === point_no,
  );
}

function selectOrdinal(state: NavState, ordinal: number): NavState {
  const rally = state.index?.rallies[ordinal];
  if (!rally) return state;
  return selectRally(state, rally.rally_id);
}

export function canNextPoint(state: NavState): boolean {
  const at = selectedOrdinal(state);
  if (at < 0 || !state.index) return state.index !== null && state.index.rallies.length > 0;
  const cur = state.index.rallies[at]!;
  return state.index.rallies.some(
    (r, i) =>
      i > at &&
      (r.set_no !== cur.set_no ||
        r.game_no !== cur.game_no ||
        r.point_no !== cur.point_no),
  );
}

export function canPrevPoint(state: NavState): boolean {
  return selectedOrdinal(state) > 0;
}

/** Walk to the next distinct point in rally order. */
export function nextPoint(state: NavState): NavState {
  if (!state.index) return state;
  const at = selectedOrdinal(state);
  if (at < 0) return selectOrdinal(state, 0);
  const cur = state.index.rallies[at]!;
  for (let i = at + 1; i < state.index.rallies.length; i++) {
    const r = state.index.rallies[i]!;
    if (
      r.set_no !== cur.set_no ||
      r.game_no !== cur.game_no ||
      r.point_no !== cur.point_no
    ) {
      return selectOrdinal(state, i);
    }
  }
  return state;
}

export function prevPoint(state: NavState): NavState {
  if (!state.index) return state;
  const at = selectedOrdinal(state);
  if (at <= 0) return state;
  return selectOrdinal(state, at - 1);
}

/** Jump to the first rally of the next game (crossing sets if needed). */
export function nextGame(state: NavState): NavState {
  if (!state.index) return state;
  const at = Math.max(selectedOrdinal(state), 0);
  const cur = state.index.rallies[at];
  if (!cur) return state;
  for (let i = at + 1; i < state.index.rallies.length; i++) {
    const r = state.index.rallies[i]!;
    if (r.set_no !== cur.set_no || r.game_no !== cur.game_no) {
      return selectOrdinal(state, i);
    }
  }
  return state;
}

export function nextSet(state: NavState): NavState {
  if (!state.index) return state;
  const at = Math.max(selectedOrdinal(state), 0);
  const cur = state.index.rallies[at];
  if (!cur) return state;
  for (let i = at + 1; i < state.index.rallies.length; i++) {
    const r = state.index.rallies[i]!;
    if (r.set_no !== cur.set_no) {
      return selectOrdinal(state, i);
    }
  }
  return state;
}

/** Seconds into the match video for a frame, from the index fps. */
export function frameToSeconds(state: NavState, frame: number): number {
  const fps = state.index?.fps ?? 30;
  return frame / fps;
}
