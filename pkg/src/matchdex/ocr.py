"""Boundary between external text recognizers and the pipeline.

Real recognizers (Tesseract, CRNN, Textspot) live outside this package;
they meet the pipeline at a data seam: a UTF-8 file of two-line records
separated by blank lines, top line player A, bottom line player B.
This module parses such text into observations, measures recognizer
quality by normalized edit distance, and simulates a noisy recognition
channel for testing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._kernels import levenshtein
from .refine import ObservedScore
from .scoring import MatchFormat, ScoreState

DEFAULT_CONFUSIONS: dict[str, str] = {
    "0": "O", "O": "0",
    "1": "I", "I": "1",
    "3": "8", "8": "3",
}


@dataclass(frozen=True, slots=True)
class RawScoreText:
    """One rally's recognized scorecard text, split horizontally."""

    lines: tuple[str, str]


@dataclass(frozen=True, slots=True)
class NoiseSpec:
    """Synthetic stand-in for OCR error behavior, reproducible by seed."""

    substitution_rate: float = 0.0
    deletion_rate: float = 0.0
    digit_confusions: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_CONFUSIONS)
    )
    seed: int = 0

    def __post_init__(self) -> None:
        for rate in (self.substitution_rate, self.deletion_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"rate out of [0,1]: {rate}")


def _split_line(line: str):
    """Right-to-left token grammar: [point, games, sets, history...].

    Names have variable token counts, so scores are read from the right;
    numeric tokens beyond the sets column are completed-set history.
    """
    toks = line.split()
    point = toks[-1] if len(toks) >= 1 else ""
    games = toks[-2] if len(toks) >= 2 else ""
    sets_ = toks[-3] if len(toks) >= 3 else ""
    rest = toks[:-3]
    # drop leading name tokens, keep numeric history columns
    history = tuple(t for t in rest if t.isdigit())
    return sets_, games, point, history


def parse_score_text(t: RawScoreText, fmt: MatchFormat) -> ObservedScore:
    """Decode a two-line scorecard reading; never raises on bad text."""
    sa, ga, pa, hist_a = _split_line(t.lines[0])
    sb, gb, pb, hist_b = _split_line(t.lines[1])
    return ObservedScore.from_fields(
        (sa, ga, pa, sb, gb, pb), fmt, set_history=(hist_a, hist_b)
    )


def render_state_lines(s: ScoreState, names: tuple[str, str] = ("A", "B")) -> RawScoreText:
    """Deterministic two-line rendering, the inverse of parse_score_text."""
    return RawScoreText(
        (
            f"{names[0]} {s.sets_a} {s.games_a} {s.point_a.value}",
            f"{names[1]} {s.sets_b} {s.games_b} {s.point_b.value}",
        )
    )


def normalized_edit_distance(a: str, b: str) -> float:
    """Character-level Levenshtein distance over max string length.

    Spaces count as characters; two empty strings are at distance 0.
    """
    if not a and not b:
        return 0.0
    return levenshtein(a, b) / max(len(a), len(b))


def corrupt_sequence(truth: list[RawScoreText], spec: NoiseSpec) -> list[RawScoreText]:
    """Seeded per-token substitution and deletion channel.

    A substituted token gets one confusable character swapped from the
    confusion map; deletions drop tokens within a line but never a whole
    entry (each line keeps at least one token). Output length always
    equals input length.
    """
    rng = np.random.default_rng(spec.seed)
    out: list[RawScoreText] = []
    for record in truth:
        new_lines = []
        for line in record.lines:
            toks = line.split()
            subbed = []
            for tok in toks:
                if rng.random() < spec.substitution_rate:
                    positions = [
                        k for k, ch in enumerate(tok) if ch in spec.digit_confusions
                    ]
                    if positions:
                        k = positions[int(rng.integers(len(positions)))]
                        choices = spec.digit_confusions[tok[k]]
                        ch = choices[int(rng.integers(len(choices)))]
                        tok = tok[:k] + ch + tok[k + 1:]
                subbed.append(tok)
            keep_mask = [rng.random() >= spec.deletion_rate for _ in subbed]
            if not any(keep_mask):
                keep_mask[0] = True  # a line never loses its last token
            kept = [tok for tok, keep in zip(subbed, keep_mask) if keep]
            new_lines.append(" ".join(kept))
        out.append(RawScoreText((new_lines[0], new_lines[1])))
    return out


def write_recognized_text(path: str | Path, records: list[RawScoreText]) -> None:
    """Recognized-text file: blank-line-separated two-line records."""
    body = "\n\n".join("\n".join(r.lines) for r in records)
    Path(path).write_text(body + "\n", encoding="utf-8")


def read_recognized_text(path: str | Path) -> list[RawScoreText]:
    text = Path(path).read_text(encoding="utf-8")
    records = []
    for block in text.split("\n\n"):
        lines = [ln for ln in block.splitlines() if ln.strip()]
        if not lines:
            continue
        if len(lines) != 2:
            raise ValueError(f"record needs exactly two lines, got {len(lines)}")
        records.append(RawScoreText((lines[0], lines[1])))
    return records
