"""Score-sequence refinement over the scoring automaton.

Per-rally recognized scores arrive as :class:`ObservedScore` rows that
may carry out-of-vocabulary tokens. Refinement runs two stages: windowed
mode smoothing of the slowly-varying games/sets columns, then automaton
intersection — a flagged entry is replaced by the candidate from
``nextStates(prev) ∩ previousStates(next)`` most similar to the
observation (Kronecker-delta field agreement, |J| = 6 fields).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import EmptySequence, LengthMismatch
from .scoring import (
    INITIAL_STATE,
    MatchFormat,
    PointScore,
    ScoreState,
    automaton,
)

# canonical field order, shared with ScoreState.fields()
FIELD_NAMES = ("sets_a", "games_a", "point_a", "sets_b", "games_b", "point_b")
_GAMES_SETS = (0, 1, 3, 4)  # indices of the sets/games columns
_POINTS = (2, 5)


@dataclass(frozen=True, slots=True)
class ObservedScore:
    """One rally's raw scoreboard reading with per-field validity.

    ``raw`` holds the six tokens verbatim; ``values`` holds the decoded
    field (int or PointScore) where the token is in vocabulary, else
    None. ``set_history`` keeps any extra completed-set columns the
    scoreboard carried (recorded, unused downstream).
    """

    raw: tuple[str, str, str, str, str, str]
    values: tuple
    in_vocab: tuple[bool, bool, bool, bool, bool, bool]
    set_history: tuple[tuple[str, ...], tuple[str, ...]] = ((), ())

    @property
    def parse_ok(self) -> bool:
        return all(self.in_vocab)

    def to_state(self) -> ScoreState | None:
        """Assemble a ScoreState when every field is in vocabulary."""
        if not self.parse_ok:
            return None
        return ScoreState(*self.values)

    @staticmethod
    def from_state(s: ScoreState) -> "ObservedScore":
        raw = tuple(
            f.value if isinstance(f, PointScore) else str(f) for f in s.fields()
        )
        return ObservedScore(raw=raw, values=s.fields(), in_vocab=(True,) * 6)

    @staticmethod
    def from_fields(raw: tuple[str, ...], fmt: MatchFormat,
                    set_history: tuple[tuple[str, ...], tuple[str, ...]] = ((), ())) -> "ObservedScore":
        """Vocabulary-check six raw tokens (sets_a, games_a, point_a, sets_b, games_b, point_b)."""
        values = []
        in_vocab = []
        for i, tok in enumerate(raw):
            if i in _POINTS:
                ok = tok in ("0", "15", "30", "40", "AD")
                values.append(PointScore(tok) if ok else None)
            else:
                hi = fmt.sets_to_win if i in (0, 3) else 7
                ok = tok.isdigit() and int(tok) <= hi
                values.append(int(tok) if ok else None)
            in_vocab.append(ok)
        return ObservedScore(
            raw=tuple(raw), values=tuple(values), in_vocab=tuple(in_vocab),
            set_history=set_history,
        )


@dataclass(frozen=True, slots=True)
class ScoreSequence:
    """ObservedScore rows in temporal (segment) order."""

    entries: tuple[ObservedScore, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> ObservedScore:
        return self.entries[i]

    @staticmethod
    def from_states(states) -> "ScoreSequence":
        return ScoreSequence(tuple(ObservedScore.from_state(s) for s in states))


@dataclass(frozen=True, slots=True)
class RefineConfig:
    mode_window: int = 5

    def __post_init__(self) -> None:
        if self.mode_window < 3 or self.mode_window % 2 == 0:
            raise ValueError("mode_window must be odd and >= 3")


@dataclass(frozen=True, slots=True)
class CorrectionEntry:
    index: int
    candidates: int
    chosen: ScoreState | None
    applied: bool

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "candidates": self.candidates,
            "chosen": self.chosen.render() if self.chosen is not None else None,
            "applied": self.applied,
        }


@dataclass(frozen=True, slots=True)
class CorrectionReport:
    entries: tuple[CorrectionEntry, ...] = field(default=())

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]

    @property
    def applied_indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.entries if e.applied)

    @property
    def unresolved_indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.entries if not e.applied)


def state_similarity(a: ScoreState, b: ScoreState) -> float:
    """Fraction of the six fields on which the states agree."""
    return sum(x == y for x, y in zip(a.fields(), b.fields())) / 6.0


def observed_similarity(obs: ObservedScore, cand: ScoreState) -> float:
    """Eq.-2 similarity of an observation against a candidate state.

    Out-of-vocabulary fields agree with nothing (delta = 0).
    """
    cf = cand.fields()
    return sum(
        ok and v == cf[i] for i, (ok, v) in enumerate(zip(obs.in_vocab, obs.values))
    ) / 6.0


def _window_mode(values: list, lo: int, hi: int) -> int | None:
    """Mode of the in-vocabulary values in [lo, hi); ties go to the
    value seen earliest in the window. None when no usable value."""
    counts: dict[int, int] = {}
    order: list[int] = []
    for v in values[lo:hi]:
        if v is None:
            continue
        if v not in counts:
            counts[v] = 0
            order.append(v)
        counts[v] += 1
    if not counts:
        return None
    best = max(counts.values())
    for v in order:
        if counts[v] == best:
            return v
    return None


def _reset_allowed(values: list, lo: int, hi: int, pos: int) -> bool:
    """A zero at ``pos`` is a plausible games reset (set boundary) when
    the window holds another zero, or is all-zero from its first zero on."""
    window = values[lo:hi]
    rel = pos - lo
    if any(v == 0 for i, v in enumerate(window) if i != rel):
        return True
    first = next(i for i, v in enumerate(window) if v == 0)
    return all(v == 0 for v in window[first:] if v is not None)


def smooth_games_sets(seq: ScoreSequence, cfg: RefineConfig = RefineConfig()) -> ScoreSequence:
    """Replace games/sets outliers with the windowed mode.

    A value survives when it equals the window mode or mode + 1 (a score
    change inside the window), or is a zero consistent with a games
    reset at a set boundary. Point fields are never touched.
    """
    n = len(seq)
    if n == 0:
        raise EmptySequence("cannot smooth an empty sequence")
    half = cfg.mode_window // 2
    entries = list(seq.entries)
    for col in _GAMES_SETS:
        values = [e.values[col] for e in entries]
        for i in range(n):
            lo, hi = max(0, i - half), min(n, i + half + 1)
            mode = _window_mode(values, lo, hi)
            if mode is None:
                continue
            v = values[i]
            if v is not None and v in (mode, mode + 1):
                continue
            if v == 0 and mode != 0 and _reset_allowed(values, lo, hi, i):
                continue
            e = entries[i]
            raw = list(e.raw)
            vals = list(e.values)
            ok = list(e.in_vocab)
            raw[col], vals[col], ok[col] = str(mode), mode, True
            entries[i] = replace(
                e, raw=tuple(raw), values=tuple(vals), in_vocab=tuple(ok)
            )
    return ScoreSequence(tuple(entries))


def flag_errors(seq: ScoreSequence, fmt: MatchFormat) -> list[int]:
    """Indices whose entry has an out-of-vocabulary field or assembles
    into an invalid (unreachable) state."""
    auto = automaton(fmt)
    flagged = []
    for i, e in enumerate(seq.entries):
        s = e.to_state()
        if s is None or not auto.is_valid(s):
            flagged.append(i)
    return flagged


def _candidate_rank(obs: ObservedScore, auto):
    """Sort key for argmax: similarity desc, then the documented
    tie-breaks (games/sets exact match, fewer points played, lexical)."""

    def key(p: ScoreState):
        sim = observed_similarity(obs, p)
        pf = p.fields()
        gs_match = all(
            obs.in_vocab[c] and obs.values[c] == pf[c] for c in _GAMES_SETS
        )
        return (-sim, not gs_match, auto.depth(p), p.sort_key())

    return key


def correct_sequence(
    seq: ScoreSequence, fmt: MatchFormat, cfg: RefineConfig = RefineConfig()
) -> tuple[ScoreSequence, CorrectionReport]:
    """Mode-smooth, then repair flagged entries by automaton intersection.

    Flagged indices are processed in ascending order so each repair can
    lean on the already-corrected left neighbor. Boundary entries use the
    single available neighbor; an empty intersection pools both one-sided
    sets (a fault duplicate lives in previous_states(right), never in
    next_states(left)); with no valid neighbor the entry is left flagged.
    """
    if len(seq) == 0:
        raise EmptySequence("cannot correct an empty sequence")
    auto = automaton(fmt)
    smoothed = smooth_games_sets(seq, cfg)
    entries = list(smoothed.entries)
    report: list[CorrectionEntry] = []
    for i in flag_errors(smoothed, fmt):
        left = entries[i - 1].to_state() if i > 0 else None
        if left is not None and not auto.is_valid(left):
            left = None
        right = entries[i + 1].to_state() if i + 1 < len(entries) else None
        if right is not None and not auto.is_valid(right):
            right = None

        candidates: set[ScoreState] = set()
        if left is not None and right is not None:
            nxt = auto.next_states(left)
            prv = auto.previous_states(right)
            candidates = nxt & prv
            if not candidates:
                candidates = nxt | prv
        elif left is not None:
            candidates = auto.next_states(left)
        elif right is not None:
            candidates = auto.previous_states(right)

        if not candidates:
            report.append(CorrectionEntry(i, 0, None, False))
            continue
        chosen = min(candidates, key=_candidate_rank(entries[i], auto))
        entries[i] = ObservedScore.from_state(chosen)
        report.append(CorrectionEntry(i, len(candidates), chosen, True))
    return ScoreSequence(tuple(entries)), CorrectionReport(tuple(report))


def score_accuracy(computed: list[ScoreState], truth: list[ScoreState]) -> float:
    """Averaged per-field state accuracy AC(R) over paired rally lists."""
    if len(computed) != len(truth):
        raise LengthMismatch(f"{len(computed)} computed vs {len(truth)} truth")
    if not computed:
        raise EmptySequence("AC needs at least one rally")
    return sum(state_similarity(c, g) for c, g in zip(computed, truth)) / len(computed)


def observed_accuracy(seq: ScoreSequence, truth: list[ScoreState]) -> float:
    """AC(R) of raw observations against truth.

    An entry with any out-of-vocabulary field yields no computed game
    state, so it scores zero on all six fields.
    """
    if len(seq) != len(truth):
        raise LengthMismatch(f"{len(seq)} observed vs {len(truth)} truth")
    if len(seq) == 0:
        raise EmptySequence("AC needs at least one rally")
    total = 0.0
    for e, g in zip(seq.entries, truth):
        s = e.to_state()
        if s is not None:
            total += state_similarity(s, g)
    return total / len(seq)


def carry_forward_states(
    seq: ScoreSequence, fmt: MatchFormat
) -> tuple[list[ScoreState], list[bool]]:
    """Best-effort state per entry: unrecoverable rows inherit the last
    valid state (initial state before any), flagged True."""
    auto = automaton(fmt)
    states: list[ScoreState] = []
    flagged: list[bool] = []
    last = INITIAL_STATE
    for e in seq.entries:
        s = e.to_state()
        if s is not None and auto.is_valid(s):
            last = s
            states.append(s)
            flagged.append(False)
        else:
            states.append(last)
            flagged.append(True)
    return states, flagged
