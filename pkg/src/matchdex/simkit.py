"""Deterministic synthetic data: score walks, scorecard text, frame stacks.

Everything is a pure function of a SimSpec; the spec's 64-bit seed
drives one numpy Generator per call, so outputs are bitwise
reproducible and every generator doubles as ground truth for the
pipeline stage it feeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSpec
from .ocr import RawScoreText, render_state_lines
from .rally import FrameStack, Segment
from .scorecard import BBox
from .scoring import (
    INITIAL_STATE,
    MatchFormat,
    ScoreState,
    Winner,
    automaton,
)

CORNERS = ("tl", "tr", "bl", "br")


@dataclass(frozen=True)
class SimSpec:
    seed: int = 0
    n_points: int = 20
    best_of: int = 5
    fault_prob: float = 0.06
    width: int = 128
    height: int = 72
    rally_len: tuple[int, int] = (60, 180)
    gap_len: tuple[int, int] = (40, 120)
    corner: str = "tl"
    box_size: tuple[int, int] = (40, 10)  # (width, height)
    box_margin: int = 2
    pan_speed: int = 3
    noise_amp: int = 3

    def __post_init__(self) -> None:
        if self.corner not in CORNERS:
            raise BadSpec(f"corner must be one of {CORNERS}")
        for lo, hi in (self.rally_len, self.gap_len):
            if lo <= 0 or hi < lo:
                raise BadSpec("length ranges must be nonempty and positive")
        if self.pan_speed < 2:
            raise BadSpec("background must pan at >= 2 px/frame")
        if self.box_size[0] <= 0 or self.box_size[1] <= 0:
            raise BadSpec("box dims must be positive")

    @property
    def format(self) -> MatchFormat:
        return MatchFormat(self.best_of)


def generate_match_walk(spec: SimSpec) -> tuple[list[ScoreState], list[int]]:
    """Seeded scoreboard walk with fault duplicates.

    Returns the per-rally scoreboard reading (the pre-rally state) and
    the indices whose reading duplicates its predecessor (faults). The
    walk stops early if the match completes before n_points rallies.
    """
    if spec.n_points < 1:
        raise BadSpec("n_points must be >= 1")
    rng = np.random.default_rng(spec.seed)
    fmt = spec.format
    auto = automaton(fmt)
    states = [INITIAL_STATE]
    faults: list[int] = []
    while len(states) < spec.n_points:
        cur = states[-1]
        if rng.random() < spec.fault_prob:
            states.append(cur)
            faults.append(len(states) - 1)
            continue
        if auto.is_terminal(cur):
            break
        winner = Winner.A if rng.random() < 0.5 else Winner.B
        states.append(auto.transition(cur, winner))
    return states, faults


def render_score_text(
    states: list[ScoreState], faults: list[int] | None = None
) -> list[RawScoreText]:
    """Two-line scorecard text per state, the parse grammar's inverse.

    Fault positions already appear as duplicated states, so they render
    naturally; the argument is accepted for symmetry with the walk.
    """
    return [render_state_lines(s) for s in states]


def _segment_plan(spec: SimSpec, rng: np.random.Generator) -> tuple[list[Segment], int]:
    """Alternating gap/rally spans; returns rally segments + total frames."""
    cursor = 0
    segments: list[Segment] = []
    for _ in range(spec.n_points):
        cursor += int(rng.integers(spec.gap_len[0], spec.gap_len[1] + 1))
        length = int(rng.integers(spec.rally_len[0], spec.rally_len[1] + 1))
        segments.append(Segment(cursor, cursor + length - 1))
        cursor += length
    cursor += int(rng.integers(spec.gap_len[0], spec.gap_len[1] + 1))
    return segments, cursor


def _court_pattern(spec: SimSpec) -> np.ndarray:
    """Uniform field with a brighter line grid (the overhead-camera look)."""
    court = np.full((spec.height, spec.width), 120, dtype=np.uint8)
    court[::16, :] = 200
    court[:, ::16] = 200
    return court


def _background_texture(spec: SimSpec, rng: np.random.Generator) -> np.ndarray:
    """Smooth panning texture with sparse hard edges.

    The hard speckles supply the stack's global gradient maximum so the
    scorecard's own edges sit mid-range in the correlation fusion.
    """
    field = rng.uniform(0.0, 1.0, (spec.height, spec.width))
    for _ in range(3):  # cheap separable box blur
        field = (np.roll(field, 1, 0) + field + np.roll(field, -1, 0)) / 3.0
        field = (np.roll(field, 1, 1) + field + np.roll(field, -1, 1)) / 3.0
    field -= field.min()
    field /= max(field.max(), 1e-9)
    tex = (40 + field * 120).astype(np.uint8)
    n_speckles = max(8, spec.height * spec.width // 1500)
    ys = rng.integers(0, spec.height, n_speckles)
    xs = rng.integers(0, spec.width, n_speckles)
    for y, x in zip(ys, xs):
        tex[y : y + 2, x : x + 2] = 255
    return tex


def _box_geometry(spec: SimSpec) -> BBox:
    bw, bh = spec.box_size
    if bw + spec.box_margin > spec.width // 2 or bh + spec.box_margin > spec.height // 5:
        raise BadSpec("scorecard box does not fit its corner window")
    x = spec.box_margin if spec.corner in ("tl", "bl") else spec.width - spec.box_margin - bw
    y = spec.box_margin if spec.corner in ("tl", "tr") else spec.height - spec.box_margin - bh
    return BBox(x=x, y=y, w=bw, h=bh)


def _draw_box(frame: np.ndarray, box: BBox) -> None:
    # period-4 stripes: every interior row sees a contrast step across its
    # centered-difference neighbors (period 2 would cancel out)
    rows = np.arange(box.h)[:, None]
    stripes = np.where((rows // 2) % 2 == 0, 150, 90).astype(np.uint8)
    frame[box.y : box.y + box.h, box.x : box.x + box.w] = stripes


def render_synthetic_stack(spec: SimSpec) -> tuple[FrameStack, dict]:
    """Frame stack with ground truth {segments, bbox, corner}.

    Rally frames show a static court grid with <=1 px jitter; non-rally
    frames pan a textured background at pan_speed px/frame; a static
    striped scorecard box sits at the chosen corner in every frame.
    """
    if spec.width < 64 or spec.height < 64:
        raise BadSpec("stack dims must be at least 64x64")
    rng = np.random.default_rng(spec.seed)
    if spec.n_points > 0:
        segments, total = _segment_plan(spec, rng)
    else:
        segments, total = [], int(rng.integers(spec.gap_len[0], spec.gap_len[1] + 1))
    court = _court_pattern(spec)
    tex = _background_texture(spec, rng)
    box = _box_geometry(spec)

    in_rally = np.zeros(total, dtype=bool)
    for seg in segments:
        in_rally[seg.start_frame : seg.end_frame + 1] = True

    frames = np.empty((total, spec.height, spec.width), dtype=np.uint8)
    jitter = rng.integers(-1, 2, size=(total, 2))
    for t in range(total):
        if in_rally[t]:
            frame = np.roll(court, (int(jitter[t, 0]), int(jitter[t, 1])), axis=(0, 1))
        else:
            frame = np.roll(tex, spec.pan_speed * t, axis=1)
        frame = frame.copy()
        _draw_box(frame, box)
        frames[t] = frame
    if spec.noise_amp > 0:
        noise = rng.integers(
            -spec.noise_amp, spec.noise_amp + 1, size=frames.shape, dtype=np.int16
        )
        frames = np.clip(frames.astype(np.int16) + noise, 0, 255).astype(np.uint8)
    truth = {
        "segments": [{"start_frame": s.start_frame, "end_frame": s.end_frame} for s in segments],
        "bbox": box.to_json(spec.corner),
        "corner": spec.corner,
    }
    return FrameStack(frames), truth


def frame_labels(total: int, segments: list[Segment]) -> np.ndarray:
    """+1 inside rally spans, -1 outside (classifier ground truth)."""
    labels = -np.ones(total, dtype=np.int8)
    for seg in segments:
        labels[seg.start_frame : seg.end_frame + 1] = 1
    return labels
