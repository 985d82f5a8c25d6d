"""Human-accessible event tags derived from consecutive refined scores."""

from __future__ import annotations

import enum

from .errors import InvalidState
from .scoring import MatchFormat, PointScore, ScoreState, is_valid


class EventTag(enum.Enum):
    FAULT = "fault"
    DEUCE = "deuce"
    ADVANTAGE = "advantage"


def _check(s: ScoreState, fmt: MatchFormat | None, name: str) -> None:
    if fmt is not None:
        if not is_valid(s, fmt):
            raise InvalidState(f"{name} state is not reachable: {s!r}")
        return
    # without a format, enforce the structural point invariants only
    ads = (s.point_a is PointScore.AD, s.point_b is PointScore.AD)
    if all(ads):
        raise InvalidState("both players at advantage")
    if ads[0] and s.point_b is not PointScore.P40:
        raise InvalidState("advantage requires the opponent at 40")
    if ads[1] and s.point_a is not PointScore.P40:
        raise InvalidState("advantage requires the opponent at 40")


def tag_segment(
    prev: ScoreState | None, cur: ScoreState, fmt: MatchFormat | None = None
) -> set[EventTag]:
    """Tags for the segment whose scoreboard reads ``cur``.

    DEUCE: both points at 40. ADVANTAGE: either side holds AD. FAULT:
    the scoreboard did not move since the previous segment (the earlier
    serve attempt faulted, so this successor segment replays the point).
    """
    _check(cur, fmt, "cur")
    if prev is not None:
        _check(prev, fmt, "prev")
    tags: set[EventTag] = set()
    if cur.point_a is PointScore.P40 and cur.point_b is PointScore.P40:
        tags.add(EventTag.DEUCE)
    if cur.point_a is PointScore.AD or cur.point_b is PointScore.AD:
        tags.add(EventTag.ADVANTAGE)
    if prev is not None and prev == cur:
        tags.add(EventTag.FAULT)
    return tags


def tag_sequence(
    states: list[ScoreState], fmt: MatchFormat | None = None
) -> list[set[EventTag]]:
    """tag_segment over consecutive pairs of a refined score list."""
    out: list[set[EventTag]] = []
    prev: ScoreState | None = None
    for s in states:
        out.append(tag_segment(prev, s, fmt))
        prev = s
    return out
