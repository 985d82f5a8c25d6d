"""Tennis scoring modeled as a finite automaton over full match states.

A state carries six fields per the scoreboard: sets, games and point for
each player. Games reset to (0, 0) when a set completes (the six-field
state keeps only the current set's games; per-set history lives in the
match index, not here). A tiebreak is one opaque game: 6-6 plus a game
win ends the set 7-6 with no inner tiebreak points.

The full reachable state space per format is small (< 10^4 states), so
validity, successor and predecessor queries are answered from a closure
precomputed once per format by breadth-first search from the initial
state.
"""

from __future__ import annotations

import enum
import functools
from collections import deque
from dataclasses import dataclass

from .errors import InvalidState, MatchOver


class Winner(enum.Enum):
    A = "A"
    B = "B"


class PointScore(enum.Enum):
    P0 = "0"
    P15 = "15"
    P30 = "30"
    P40 = "40"
    AD = "AD"


_POINT_ORDER = (PointScore.P0, PointScore.P15, PointScore.P30, PointScore.P40)
_POINT_ORDINAL = {p: i for i, p in enumerate((*_POINT_ORDER, PointScore.AD))}
POINT_TOKENS = tuple(p.value for p in PointScore)


@dataclass(frozen=True, slots=True)
class MatchFormat:
    """Best-of-3 (Olympics style) or best-of-5 (Grand Slam style)."""

    best_of: int = 5

    def __post_init__(self) -> None:
        if self.best_of not in (3, 5):
            raise ValueError(f"best_of must be 3 or 5, got {self.best_of}")

    @property
    def sets_to_win(self) -> int:
        return (self.best_of + 1) // 2


@dataclass(frozen=True, slots=True)
class ScoreState:
    """Six-field scoreboard state: sets, games, point for each player."""

    sets_a: int
    games_a: int
    point_a: PointScore
    sets_b: int
    games_b: int
    point_b: PointScore

    def fields(self) -> tuple:
        """The six comparable field values, in canonical order."""
        return (
            self.sets_a,
            self.games_a,
            self.point_a,
            self.sets_b,
            self.games_b,
            self.point_b,
        )

    def sort_key(self) -> tuple:
        return (
            self.sets_a,
            self.games_a,
            _POINT_ORDINAL[self.point_a],
            self.sets_b,
            self.games_b,
            _POINT_ORDINAL[self.point_b],
        )

    def render(self) -> str:
        """Text form ``"Sa-Ga-Pa|Sb-Gb-Pb"``, e.g. ``"0-0-30|0-0-30"``."""
        return (
            f"{self.sets_a}-{self.games_a}-{self.point_a.value}"
            f"|{self.sets_b}-{self.games_b}-{self.point_b.value}"
        )

    @staticmethod
    def parse(text: str) -> "ScoreState":
        """Inverse of :meth:`render`. Raises ``ValueError`` on bad input."""
        try:
            side_a, side_b = text.split("|")
            sa, ga, pa = side_a.split("-")
            sb, gb, pb = side_b.split("-")
            return ScoreState(
                int(sa), int(ga), PointScore(pa), int(sb), int(gb), PointScore(pb)
            )
        except (ValueError, KeyError) as exc:
            raise ValueError(f"not a score state: {text!r}") from exc


INITIAL_STATE = ScoreState(0, 0, PointScore.P0, 0, 0, PointScore.P0)


def _won_point(point_w: PointScore, point_l: PointScore) -> tuple[PointScore, PointScore, bool]:
    """Apply one point for the winning side; returns (w, l, game_won)."""
    if point_w is PointScore.AD:
        return PointScore.P0, PointScore.P0, True
    if point_w is PointScore.P40:
        if point_l is PointScore.AD:
            # back to deuce
            return PointScore.P40, PointScore.P40, False
        if point_l is PointScore.P40:
            return PointScore.AD, PointScore.P40, False
        return PointScore.P0, PointScore.P0, True
    nxt = _POINT_ORDER[_POINT_ORDER.index(point_w) + 1]
    return nxt, point_l, False


def _set_won(games_w: int, games_l: int) -> bool:
    # 6 with margin >= 2 (covers 7-5), or the 7-6 tiebreak boundary
    return (games_w >= 6 and games_w - games_l >= 2) or (games_w == 7 and games_l == 6)


def _step(s: ScoreState, winner: Winner) -> ScoreState:
    """Successor of a valid, non-terminal state after one point."""
    if winner is Winner.A:
        pw, pl, game_won = _won_point(s.point_a, s.point_b)
        if not game_won:
            return ScoreState(s.sets_a, s.games_a, pw, s.sets_b, s.games_b, pl)
        games_w = s.games_a + 1
        if _set_won(games_w, s.games_b):
            return ScoreState(s.sets_a + 1, 0, PointScore.P0, s.sets_b, 0, PointScore.P0)
        return ScoreState(s.sets_a, games_w, PointScore.P0, s.sets_b, s.games_b, PointScore.P0)
    pw, pl, game_won = _won_point(s.point_b, s.point_a)
    if not game_won:
        return ScoreState(s.sets_a, s.games_a, pl, s.sets_b, s.games_b, pw)
    games_w = s.games_b + 1
    if _set_won(games_w, s.games_a):
        return ScoreState(s.sets_a, 0, PointScore.P0, s.sets_b + 1, 0, PointScore.P0)
    return ScoreState(s.sets_a, s.games_a, PointScore.P0, s.sets_b, games_w, PointScore.P0)


class TennisAutomaton:
    """Reachability closure of the scoring rules for one match format.

    Immutable after construction; all queries are dictionary lookups and
    safe for shared concurrent reads.
    """

    def __init__(self, fmt: MatchFormat) -> None:
        self.format = fmt
        forward: dict[ScoreState, tuple[ScoreState, ...]] = {}
        inverse: dict[ScoreState, set[ScoreState]] = {INITIAL_STATE: set()}
        depth: dict[ScoreState, int] = {INITIAL_STATE: 0}
        queue: deque[ScoreState] = deque([INITIAL_STATE])
        goal = fmt.sets_to_win
        while queue:
            s = queue.popleft()
            if s.sets_a == goal or s.sets_b == goal:
                forward[s] = ()
                continue
            succ = (_step(s, Winner.A), _step(s, Winner.B))
            forward[s] = succ
            for t in succ:
                if t not in depth:
                    depth[t] = depth[s] + 1
                    inverse[t] = set()
                    queue.append(t)
                inverse[t].add(s)
        self._forward = forward
        self._inverse = {s: frozenset(p) for s, p in inverse.items()}
        self._depth = depth
        self.reachable = frozenset(forward)

    def is_terminal(self, s: ScoreState) -> bool:
        goal = self.format.sets_to_win
        return s.sets_a == goal or s.sets_b == goal

    def depth(self, s: ScoreState) -> int:
        """Minimal points played to reach ``s`` from the initial state."""
        return self._depth[s]

    def is_valid(self, s: object) -> bool:
        return isinstance(s, ScoreState) and s in self.reachable

    def transition(self, s: ScoreState, winner: Winner) -> ScoreState:
        if not self.is_valid(s):
            raise InvalidState(f"not a reachable state: {s!r}")
        if self.is_terminal(s):
            raise MatchOver(f"match already won at {s.render()}")
        return self._forward[s][0 if winner is Winner.A else 1]

    def next_states(self, s: ScoreState) -> set[ScoreState]:
        if not self.is_valid(s):
            raise InvalidState(f"not a reachable state: {s!r}")
        return set(self._forward[s])

    def previous_states(self, s: ScoreState) -> set[ScoreState]:
        if not self.is_valid(s):
            raise InvalidState(f"not a reachable state: {s!r}")
        return set(self._inverse[s])


@functools.lru_cache(maxsize=4)
def automaton(fmt: MatchFormat) -> TennisAutomaton:
    """Shared per-format automaton (closure built once)."""
    return TennisAutomaton(fmt)


def is_valid(s: object, fmt: MatchFormat) -> bool:
    """True iff ``s`` is a reachable state of the format's automaton.

    Total: arbitrary field values (including out-of-vocabulary garbage)
    simply yield False.
    """
    return automaton(fmt).is_valid(s)


def transition(s: ScoreState, winner: Winner, fmt: MatchFormat) -> ScoreState:
    return automaton(fmt).transition(s, winner)


def next_states(s: ScoreState, fmt: MatchFormat) -> set[ScoreState]:
    return automaton(fmt).next_states(s)


def previous_states(s: ScoreState, fmt: MatchFormat) -> set[ScoreState]:
    return automaton(fmt).previous_states(s)
