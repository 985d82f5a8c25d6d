/** Payload types mirroring the matchdex service JSON schemas. */

export type TagName = "fault" | "deuce" | "advantage";

export interface MatchSummary {
  match_id: string;
  rallies: number;
  format: { best_of: number };
}

export interface BBoxJson {
  x: number;
  y: number;
  w: number;
  h: number;
  corner?: string;
}

export interface RallyRecordJson {
  rally_id: number;
  start_frame: number;
  end_frame: number;
  score: string; // "Sa-Ga-Pa|Sb-Gb-Pb"
  set_no: number;
  game_no: number;
  point_no: number;
  tags: TagName[];
  bbox: BBoxJson | null;
  flagged: boolean;
}

export interface MatchIndexJson {
  match_id: string;
  format: { best_of: number };
  fps: number;
  rallies: RallyRecordJson[];
}

export interface PointCoords {
  set_no: number;
  game_no: number;
  point_no: number;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}
