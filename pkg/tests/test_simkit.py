from __future__ import annotations

import numpy as np
import pytest

from matchdex.errors import BadSpec
from matchdex.ocr import parse_score_text
from matchdex.scoring import INITIAL_STATE, automaton
from matchdex.simkit import (
    SimSpec,
    frame_labels,
    generate_match_walk,
    render_score_text,
    render_synthetic_stack,
)


class TestWalk:
    def test_single_point(self):
        states, faults = generate_match_walk(SimSpec(seed=1, n_points=1))
        assert states == [INITIAL_STATE]
        assert faults == []

    def test_seeded_reproducibility(self):
        spec = SimSpec(seed=99, n_points=150, fault_prob=0.1)
        assert generate_match_walk(spec) == generate_match_walk(spec)

    def test_consecutive_pairs_follow_automaton(self):
        spec = SimSpec(seed=3, n_points=200, fault_prob=0.1)
        states, faults = generate_match_walk(spec)
        auto = automaton(spec.format)
        fault_set = set(faults)
        for i, (a, b) in enumerate(zip(states, states[1:]), start=1):
            if i in fault_set:
                assert a == b
            else:
                assert b in auto.next_states(a)

    def test_fault_positions_are_duplicates(self):
        spec = SimSpec(seed=7, n_points=300, fault_prob=0.15)
        states, faults = generate_match_walk(spec)
        assert faults
        for i in faults:
            assert states[i] == states[i - 1]

    def test_walk_stops_at_match_end(self):
        spec = SimSpec(seed=11, n_points=5000, fault_prob=0.0, best_of=3)
        states, _ = generate_match_walk(spec)
        assert len(states) < 5000
        assert automaton(spec.format).is_terminal(states[-1])

    def test_bad_spec(self):
        with pytest.raises(BadSpec):
            generate_match_walk(SimSpec(seed=0, n_points=0))


class TestScoreText:
    def test_parse_render_identity(self, fmt5):
        spec = SimSpec(seed=13, n_points=400, fault_prob=0.05)
        states, faults = generate_match_walk(spec)
        for s, text in zip(states, render_score_text(states, faults)):
            assert parse_score_text(text, fmt5).to_state() == s

    def test_initial_rendering(self):
        lines = render_score_text([INITIAL_STATE])[0].lines
        assert lines == ("A 0 0 0", "B 0 0 0")

    def test_ad_token(self, fmt5):
        spec = SimSpec(seed=17, n_points=2000, fault_prob=0.0)
        states, _ = generate_match_walk(spec)
        ad_states = [s for s in states if "AD" in s.render()]
        assert ad_states
        text = render_score_text(ad_states)[0]
        assert any("AD" in line for line in text.lines)


class TestStack:
    def test_zero_rallies_pure_background(self):
        spec = SimSpec(seed=19, n_points=0, width=64, height=64, gap_len=(50, 50),
                       box_size=(24, 8))
        stack, truth = render_synthetic_stack(spec)
        assert truth["segments"] == []
        assert stack.count == 50

    def test_seeded_reproducibility(self):
        spec = SimSpec(seed=23, n_points=3, width=64, height=64, box_size=(24, 8))
        s1, t1 = render_synthetic_stack(spec)
        s2, t2 = render_synthetic_stack(spec)
        assert np.array_equal(s1.pixels, s2.pixels)
        assert t1 == t2

    def test_rally_frames_calmer_than_gaps(self):
        spec = SimSpec(seed=29, n_points=4, width=96, height=72)
        stack, truth = render_synthetic_stack(spec)
        diffs = np.abs(
            stack.pixels[1:].astype(np.int16) - stack.pixels[:-1].astype(np.int16)
        ).mean(axis=(1, 2))
        in_rally = np.zeros(stack.count, dtype=bool)
        for seg in truth["segments"]:
            in_rally[seg["start_frame"] : seg["end_frame"] + 1] = True
        both = in_rally[1:] & in_rally[:-1]
        neither = ~in_rally[1:] & ~in_rally[:-1]
        assert diffs[both].mean() < diffs[neither].mean()

    def test_truth_segments_disjoint_in_bounds(self):
        spec = SimSpec(seed=31, n_points=6, width=64, height=64, box_size=(24, 8))
        stack, truth = render_synthetic_stack(spec)
        segs = truth["segments"]
        for a, b in zip(segs, segs[1:]):
            assert a["end_frame"] < b["start_frame"]
        assert segs[-1]["end_frame"] < stack.count

    def test_box_is_static_and_in_truth_position(self):
        spec = SimSpec(seed=37, n_points=2, width=96, height=72, corner="br",
                       noise_amp=0)
        stack, truth = render_synthetic_stack(spec)
        b = truth["bbox"]
        patch0 = stack.pixels[0, b["y"] : b["y"] + b["h"], b["x"] : b["x"] + b["w"]]
        for t in range(1, stack.count, 17):
            patch = stack.pixels[t, b["y"] : b["y"] + b["h"], b["x"] : b["x"] + b["w"]]
            assert np.array_equal(patch0, patch)

    def test_dims_too_small(self):
        with pytest.raises(BadSpec):
            render_synthetic_stack(SimSpec(seed=0, n_points=1, width=32, height=32))


def test_frame_labels():
    from matchdex.rally import Segment

    labels = frame_labels(10, [Segment(2, 4), Segment(8, 9)])
    assert labels.tolist() == [-1, -1, 1, 1, 1, -1, -1, -1, 1, 1]
