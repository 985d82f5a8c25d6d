from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchdex.errors import LengthMismatch, SchemaError, UnorderedSegments
from matchdex.events import EventTag, tag_sequence
from matchdex.index import (
    MatchIndex,
    build_index,
    filter_by_tag,
    load_index,
    query_point,
    records_in_game,
    records_in_set,
    save_index,
)
from matchdex.rally import Segment
from matchdex.scorecard import BBox
from matchdex.scoring import INITIAL_STATE, MatchFormat
from matchdex.simkit import SimSpec, generate_match_walk


def make_segments(n: int, seed: int = 0) -> list[Segment]:
    rng = random.Random(seed)
    cursor = 0
    out = []
    for _ in range(n):
        cursor += rng.randrange(30, 80)
        length = rng.randrange(40, 150)
        out.append(Segment(cursor, cursor + length - 1))
        cursor += length
    return out


def build_from_walk(seed: int, n: int, fmt: MatchFormat, match_id="m1") -> tuple:
    spec = SimSpec(seed=seed, n_points=n, best_of=fmt.best_of)
    states, faults = generate_match_walk(spec)
    segments = make_segments(len(states), seed)
    tags = tag_sequence(states, fmt)
    idx = build_index(segments, list(states), tags, fmt, fps=30.0, match_id=match_id)
    return idx, states, faults, segments


class TestBuild:
    def test_single_rally_initial_coordinates(self, fmt5):
        idx = build_index(
            [Segment(10, 60)], [INITIAL_STATE], [set()], fmt5, 30.0, "m"
        )
        r = idx.rallies[0]
        assert (r.set_no, r.game_no, r.point_no) == (1, 1, 1)

    def test_fault_pair_shares_coordinates(self, fmt5):
        idx = build_index(
            make_segments(2), [INITIAL_STATE, INITIAL_STATE],
            [set(), {EventTag.FAULT}], fmt5, 30.0, "m",
        )
        a, b = idx.rallies
        assert (a.set_no, a.game_no, a.point_no) == (1, 1, 1)
        assert (b.set_no, b.game_no, b.point_no) == (1, 1, 1)

    def test_point_counter_resets_on_new_game(self, fmt5):
        spec = SimSpec(seed=5, n_points=40, fault_prob=0.0)
        states, _ = generate_match_walk(spec)
        segments = make_segments(len(states))
        idx = build_index(
            segments, list(states), tag_sequence(states, fmt5), fmt5, 30.0, "m"
        )
        bumps = [
            (a, b) for a, b in zip(idx.rallies, idx.rallies[1:])
            if b.game_no == a.game_no + 1
        ]
        assert bumps
        for _, b in bumps:
            assert b.point_no == 1

    def test_flagged_rally_inherits(self, fmt5):
        spec = SimSpec(seed=2, n_points=6, fault_prob=0.0)
        states, _ = generate_match_walk(spec)
        scores = list(states)
        scores[3] = None
        idx = build_index(
            make_segments(6), scores, [set()] * 6, fmt5, 30.0, "m"
        )
        r2, r3 = idx.rallies[2], idx.rallies[3]
        assert r3.flagged
        assert r3.score == r2.score
        assert (r3.set_no, r3.game_no, r3.point_no) == (
            r2.set_no, r2.game_no, r2.point_no,
        )

    def test_coordinates_lexicographically_nondecreasing(self, fmt5):
        idx, *_ = build_from_walk(11, 250, fmt5)
        coords = [(r.set_no, r.game_no, r.point_no) for r in idx.rallies]
        assert coords == sorted(coords)

    def test_set_summaries_consistent(self, fmt3):
        idx, states, _, _ = build_from_walk(13, 400, fmt3)
        total_games = sum(len(s.games) for s in idx.sets)
        game_changes = sum(
            1
            for a, b in zip(states, states[1:])
            if a != b
            and ((a.games_a, a.games_b) != (b.games_a, b.games_b)
                 or (a.sets_a, a.sets_b) != (b.sets_a, b.sets_b))
        )
        assert total_games == game_changes

    def test_length_mismatch(self, fmt5):
        with pytest.raises(LengthMismatch):
            build_index([Segment(0, 10)], [], [], fmt5, 30.0, "m")

    def test_unordered_segments(self, fmt5):
        with pytest.raises(UnorderedSegments):
            build_index(
                [Segment(10, 60), Segment(40, 80)],
                [INITIAL_STATE, INITIAL_STATE],
                [set(), set()], fmt5, 30.0, "m",
            )


class TestQuery:
    def test_existing_point(self, fmt5):
        idx, states, _, _ = build_from_walk(17, 60, fmt5)
        r = idx.rallies[10]
        hits = query_point(idx, r.set_no, r.game_no, r.point_no)
        assert r in hits
        for h in hits:
            assert h.score == r.score

    def test_unknown_coordinates_empty(self, fmt5):
        idx, *_ = build_from_walk(17, 20, fmt5)
        assert query_point(idx, 99, 1, 1) == []

    def test_fault_point_returns_both_records(self, fmt5):
        spec = SimSpec(seed=23, n_points=120, fault_prob=0.2)
        states, faults = generate_match_walk(spec)
        fmt = spec.format
        idx = build_index(
            make_segments(len(states)), list(states),
            tag_sequence(states, fmt), fmt, 30.0, "m",
        )
        assert faults
        i = faults[0]
        rec = idx.rallies[i]
        hits = query_point(idx, rec.set_no, rec.game_no, rec.point_no)
        assert len(hits) >= 2
        assert EventTag.FAULT in rec.tags

    def test_filter_by_tag_preserves_order(self, fmt5):
        idx, *_ = build_from_walk(29, 300, fmt5)
        deuces = filter_by_tag(idx, "deuce")
        assert deuces == [r for r in idx.rallies if EventTag.DEUCE in r.tags]
        assert deuces  # a 300-point walk passes through deuce

    def test_filter_empty_index(self, fmt5):
        idx = MatchIndex("m", fmt5, 30.0, ())
        assert filter_by_tag(idx, EventTag.FAULT) == []

    def test_set_and_game_queries(self, fmt5):
        idx, *_ = build_from_walk(31, 200, fmt5)
        s1 = records_in_set(idx, 1)
        assert s1 and all(r.set_no == 1 for r in s1)
        g = records_in_game(idx, 1, 2)
        assert all((r.set_no, r.game_no) == (1, 2) for r in g)


class TestPersistence:
    def test_round_trip_exact(self, tmp_path, fmt5):
        idx, *_ = build_from_walk(41, 80, fmt5)
        path = tmp_path / "m.index.json"
        save_index(idx, path)
        assert load_index(path) == idx

    def test_round_trip_with_boxes(self, tmp_path, fmt5):
        spec = SimSpec(seed=43, n_points=5)
        states, _ = generate_match_walk(spec)
        boxes = [(BBox(3, 4, 40, 10), "tl")] * len(states)
        idx = build_index(
            make_segments(len(states)), list(states),
            tag_sequence(states, fmt5), fmt5, 25.0, "m", bboxes=boxes,
        )
        path = tmp_path / "m.index.json"
        save_index(idx, path)
        loaded = load_index(path)
        assert loaded == idx
        assert loaded.rallies[0].bbox == BBox(3, 4, 40, 10)
        assert loaded.rallies[0].bbox_corner == "tl"

    def test_truncated_file_schema_error(self, tmp_path):
        path = tmp_path / "bad.index.json"
        path.write_text('{"match_id": "x"', encoding="utf-8")
        with pytest.raises(SchemaError):
            load_index(path)

    def test_missing_field_pinpointed(self, tmp_path, fmt5):
        idx, *_ = build_from_walk(47, 5, fmt5)
        doc = idx.to_json()
        del doc["rallies"][2]["score"]
        path = tmp_path / "m.index.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(SchemaError) as exc:
            load_index(path)
        assert "/rallies/2" in str(exc.value)

    def test_unknown_fields_ignored(self, tmp_path, fmt5):
        idx, *_ = build_from_walk(53, 5, fmt5)
        doc = idx.to_json()
        doc["extra_top_level"] = {"anything": 1}
        doc["rallies"][0]["extra_row"] = [1, 2, 3]
        path = tmp_path / "m.index.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        assert load_index(path) == idx

    @given(seed=st.integers(0, 10_000), n=st.integers(1, 60))
    @settings(max_examples=25, deadline=None)
    def test_property_round_trip(self, tmp_path_factory, seed, n):
        fmt = MatchFormat(5)
        idx, *_ = build_from_walk(seed, n, fmt, match_id=f"m{seed}")
        path = tmp_path_factory.mktemp("idx") / "m.index.json"
        save_index(idx, path)
        assert load_index(path) == idx


class TestGeneratorBookkeeping:
    def test_query_matches_generator_coordinates(self, fmt5):
        """Oracle: replay the walk independently counting coordinates."""
        spec = SimSpec(seed=61, n_points=300, fault_prob=0.08)
        states, faults = generate_match_walk(spec)
        fmt = spec.format
        idx = build_index(
            make_segments(len(states)), list(states),
            tag_sequence(states, fmt), fmt, 30.0, "m",
        )
        # independent coordinate bookkeeping
        expected = {}
        set_no = game_no = point_no = 1
        prev = None
        for i, s in enumerate(states):
            if prev is not None and s != prev:
                if (s.sets_a, s.sets_b) != (prev.sets_a, prev.sets_b):
                    set_no, game_no, point_no = set_no + 1, 1, 1
                elif (s.games_a, s.games_b) != (prev.games_a, prev.games_b):
                    game_no, point_no = game_no + 1, 1
                else:
                    point_no += 1
            prev = s
            expected.setdefault((set_no, game_no, point_no), []).append(i)
        for coords, rally_ids in expected.items():
            got = [r.rally_id for r in query_point(idx, *coords)]
            assert got == rally_ids
