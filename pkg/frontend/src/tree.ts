/** Set -> game -> point tree derived from the flat rally list. */

import type { PointCoords, RallyRecordJson } from "./types.js";

export interface PointNode {
  coords: PointCoords;
  rallies: RallyRecordJson[];
}

export interface GameNode {
  set_no: number;
  game_no: number;
  points: PointNode[];
}

export interface SetNode {
  set_no: number;
  games: GameNode[];
}

export function buildTree(rallies: RallyRecordJson[]): SetNode[] {
  const sets: SetNode[] = [];
  let curSet: SetNode | null = null;
  let curGame: GameNode | null = null;
  let curPoint: PointNode | null = null;
  for (const r of rallies) {
    if (!curSet || curSet.set_no !== r.set_no) {
      curSet = { set_no: r.set_no, games: [] };
      sets.push(curSet);
      curGame = null;
      curPoint = null;
    }
    if (!curGame || curGame.game_no !== r.game_no) {
      curGame = { set_no: r.set_no, game_no: r.game_no, points: [] };
      curSet.games.push(curGame);
      curPoint = null;
    }
    if (!curPoint || curPoint.coords.point_no !== r.point_no) {
      curPoint = {
        coords: { set_no: r.set_no, game_no: r.game_no, point_no: r.point_no },
        rallies: [],
      };
      curGame.points.push(curPoint);
    }
    curPoint.rallies.push(r);
  }
  return sets;
}

export function countPoints(tree: SetNode[]): number {
  return tree.reduce(
    (acc, s) => acc + s.games.reduce((a, g) => a + g.points.length, 0),
    0,
  );
}
