"""The navigable match index: build, persist, query.

Each rally record carries its frame span, the scoreboard reading for
that rally (the pre-rally state), 1-based (set, game, point)
coordinates assigned by scanning score transitions, tags, and an
optional scorecard box. The index is a single JSON document; writes are
whole-file atomic.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import LengthMismatch, SchemaError, UnorderedSegments
from .events import EventTag
from .rally import Segment
from .scorecard import BBox
from .scoring import INITIAL_STATE, MatchFormat, ScoreState


@dataclass(frozen=True)
class RallyRecord:
    rally_id: int
    segment: Segment
    score: ScoreState
    set_no: int
    game_no: int
    point_no: int
    tags: frozenset[EventTag] = frozenset()
    bbox: BBox | None = None
    bbox_corner: str | None = None
    flagged: bool = False

    def to_json(self) -> dict:
        return {
            "rally_id": self.rally_id,
            "start_frame": self.segment.start_frame,
            "end_frame": self.segment.end_frame,
            "score": self.score.render(),
            "set_no": self.set_no,
            "game_no": self.game_no,
            "point_no": self.point_no,
            "tags": sorted(t.value for t in self.tags),
            "bbox": self.bbox.to_json(self.bbox_corner) if self.bbox else None,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class GameSummary:
    game_no: int
    winner: str  # "A" | "B"

    def to_json(self) -> dict:
        return {"game_no": self.game_no, "winner": self.winner}


@dataclass(frozen=True)
class SetSummary:
    set_no: int
    games: tuple[GameSummary, ...]

    def to_json(self) -> dict:
        return {"set_no": self.set_no, "games": [g.to_json() for g in self.games]}


@dataclass(frozen=True)
class MatchIndex:
    match_id: str
    format: MatchFormat
    fps: float
    rallies: tuple[RallyRecord, ...]
    sets: tuple[SetSummary, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "match_id": self.match_id,
            "format": {"best_of": self.format.best_of},
            "fps": self.fps,
            "rallies": [r.to_json() for r in self.rallies],
            "sets": [s.to_json() for s in self.sets],
        }


def _game_winner(prev: ScoreState, cur: ScoreState) -> str:
    if cur.sets_a != prev.sets_a or cur.sets_b != prev.sets_b:
        return "A" if cur.sets_a > prev.sets_a else "B"
    return "A" if cur.games_a > prev.games_a else "B"


def build_index(
    segments: list[Segment],
    scores: list[ScoreState | None],
    tags: list[set[EventTag]],
    fmt: MatchFormat,
    fps: float,
    match_id: str,
    bboxes: list[tuple[BBox, str] | None] | None = None,
) -> MatchIndex:
    """Assemble records and assign set/game/point coordinates.

    ``scores[i]`` is the scoreboard reading of rally i (None for an
    unrecovered reading: the record inherits the previous score and
    coordinates, flagged). game_no advances when a games field changes,
    set_no when a sets field changes, point_no otherwise; identical
    consecutive scores (faults) share coordinates.
    """
    if not (len(segments) == len(scores) == len(tags)):
        raise LengthMismatch("segments, scores and tags must align")
    if bboxes is not None and len(bboxes) != len(segments):
        raise LengthMismatch("bboxes must align with segments")
    for a, b in zip(segments, segments[1:]):
        if b.start_frame <= a.end_frame:
            raise UnorderedSegments(f"{a} then {b}")

    records: list[RallyRecord] = []
    summaries: dict[int, list[GameSummary]] = {}
    set_no, game_no, point_no = 1, 1, 1
    prev: ScoreState | None = None
    last_score: ScoreState | None = None
    for i, (seg, score, tagset) in enumerate(zip(segments, scores, tags)):
        flagged = score is None
        if flagged:
            score = last_score if last_score is not None else INITIAL_STATE
        else:
            if prev is not None and score != prev:
                if (score.sets_a, score.sets_b) != (prev.sets_a, prev.sets_b):
                    summaries.setdefault(set_no, []).append(
                        GameSummary(game_no, _game_winner(prev, score))
                    )
                    set_no += 1
                    game_no, point_no = 1, 1
                elif (score.games_a, score.games_b) != (prev.games_a, prev.games_b):
                    summaries.setdefault(set_no, []).append(
                        GameSummary(game_no, _game_winner(prev, score))
                    )
                    game_no += 1
                    point_no = 1
                else:
                    point_no += 1
            prev = score
            last_score = score
        box, corner = (None, None)
        if bboxes is not None and bboxes[i] is not None:
            box, corner = bboxes[i]
        records.append(
            RallyRecord(
                rally_id=i,
                segment=seg,
                score=score,
                set_no=set_no,
                game_no=game_no,
                point_no=point_no,
                tags=frozenset(tagset),
                bbox=box,
                bbox_corner=corner,
                flagged=flagged,
            )
        )
    sets = tuple(
        SetSummary(k, tuple(v)) for k, v in sorted(summaries.items())
    )
    return MatchIndex(match_id=match_id, format=fmt, fps=fps, rallies=tuple(records), sets=sets)


def query_point(idx: MatchIndex, set_no: int, game_no: int, point_no: int) -> list[RallyRecord]:
    """All records at the coordinates (several when faults repeat a point)."""
    return [
        r
        for r in idx.rallies
        if (r.set_no, r.game_no, r.point_no) == (set_no, game_no, point_no)
    ]


def filter_by_tag(idx: MatchIndex, tag: EventTag | str) -> list[RallyRecord]:
    want = tag if isinstance(tag, EventTag) else EventTag(tag)
    return [r for r in idx.rallies if want in r.tags]


def records_in_set(idx: MatchIndex, set_no: int) -> list[RallyRecord]:
    return [r for r in idx.rallies if r.set_no == set_no]


def records_in_game(idx: MatchIndex, set_no: int, game_no: int) -> list[RallyRecord]:
    return [r for r in idx.rallies if (r.set_no, r.game_no) == (set_no, game_no)]


def save_index(idx: MatchIndex, path: str | Path) -> None:
    """Atomic whole-file write (temp file + rename)."""
    path = Path(path)
    body = json.dumps(idx.to_json(), sort_keys=True, indent=2) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(body)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _need(obj: dict, key: str, kind, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing required field '{key}'", where)
    val = obj[key]
    if kind is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise SchemaError(f"'{key}' must be a number", f"{where}/{key}")
        return float(val)
    if not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
        raise SchemaError(f"'{key}' must be {kind.__name__}", f"{where}/{key}")
    return val


def load_index(path: str | Path) -> MatchIndex:
    """Parse and validate a persisted index; unknown fields are ignored."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", "") from exc
    match_id = _need(doc, "match_id", str, "")
    fmt_doc = _need(doc, "format", dict, "")
    best_of = _need(fmt_doc, "best_of", int, "/format")
    try:
        fmt = MatchFormat(best_of)
    except ValueError as exc:
        raise SchemaError(str(exc), "/format/best_of") from exc
    fps = _need(doc, "fps", float, "")
    rallies_doc = _need(doc, "rallies", list, "")
    records: list[RallyRecord] = []
    for i, row in enumerate(rallies_doc):
        where = f"/rallies/{i}"
        try:
            score = ScoreState.parse(_need(row, "score", str, where))
        except ValueError as exc:
            raise SchemaError(str(exc), f"{where}/score") from exc
        tags_doc = _need(row, "tags", list, where)
        try:
            tags = frozenset(EventTag(t) for t in tags_doc)
        except ValueError as exc:
            raise SchemaError(f"unknown tag: {exc}", f"{where}/tags") from exc
        box_doc = row.get("bbox")
        box, corner = None, None
        if box_doc is not None:
            if not isinstance(box_doc, dict):
                raise SchemaError("'bbox' must be an object or null", f"{where}/bbox")
            box = BBox(
                _need(box_doc, "x", int, f"{where}/bbox"),
                _need(box_doc, "y", int, f"{where}/bbox"),
                _need(box_doc, "w", int, f"{where}/bbox"),
                _need(box_doc, "h", int, f"{where}/bbox"),
            )
            corner = box_doc.get("corner")
        records.append(
            RallyRecord(
                rally_id=_need(row, "rally_id", int, where),
                segment=Segment(
                    _need(row, "start_frame", int, where),
                    _need(row, "end_frame", int, where),
                ),
                score=score,
                set_no=_need(row, "set_no", int, where),
                game_no=_need(row, "game_no", int, where),
                point_no=_need(row, "point_no", int, where),
                tags=tags,
                bbox=box,
                bbox_corner=corner,
                flagged=_need(row, "flagged", bool, where),
            )
        )
    sets: list[SetSummary] = []
    for k, srow in enumerate(doc.get("sets", [])):
        where = f"/sets/{k}"
        games = tuple(
            GameSummary(_need(g, "game_no", int, f"{where}/games/{j}"),
                        _need(g, "winner", str, f"{where}/games/{j}"))
            for j, g in enumerate(_need(srow, "games", list, where))
        )
        sets.append(SetSummary(_need(srow, "set_no", int, where), games))
    return MatchIndex(
        match_id=match_id, format=fmt, fps=fps,
        rallies=tuple(records), sets=tuple(sets),
    )
