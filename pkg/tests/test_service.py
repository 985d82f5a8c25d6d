from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from matchdex.events import EventTag, tag_sequence
from matchdex.index import build_index, save_index
from matchdex.rally import Segment
from matchdex.scoring import MatchFormat
from matchdex.service import ServiceConfig, create_app
from matchdex.simkit import SimSpec, generate_match_walk


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    index_dir = tmp_path_factory.mktemp("indexes")
    fmt = MatchFormat(5)
    spec = SimSpec(seed=71, n_points=120, fault_prob=0.1)
    states, _ = generate_match_walk(spec)
    cursor, segments = 0, []
    for _ in states:
        segments.append(Segment(cursor + 40, cursor + 140))
        cursor += 200
    idx = build_index(
        segments, list(states), tag_sequence(states, fmt), fmt, 30.0, "demo"
    )
    save_index(idx, index_dir / "demo.index.json")
    (index_dir / "broken.index.json").write_text("{nope", encoding="utf-8")
    app = create_app(ServiceConfig(index_dir=index_dir))
    return TestClient(app), idx


def test_healthz(client):
    c, _ = client
    r = c.get("/healthz")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_list_matches_skips_broken_files(client):
    c, idx = client
    r = c.get("/api/matches")
    assert r.status_code == 200
    assert r.json() == [
        {"match_id": "demo", "rallies": len(idx.rallies), "format": {"best_of": 5}}
    ]


def test_match_detail_round_trips_schema(client):
    c, idx = client
    r = c.get("/api/matches/demo")
    assert r.status_code == 200
    assert r.json() == idx.to_json()


def test_unknown_match_404_shape(client):
    c, _ = client
    r = c.get("/api/matches/nope")
    assert r.status_code == 404
    body = r.json()
    assert set(body) == {"error", "detail"}
    assert body["error"] == "unknown_match"


def test_point_lookup(client):
    c, idx = client
    rec = idx.rallies[7]
    r = c.get(f"/api/matches/demo/points/{rec.set_no}/{rec.game_no}/{rec.point_no}")
    assert r.status_code == 200
    assert rec.to_json() in r.json()


def test_unknown_point_404(client):
    c, _ = client
    assert c.get("/api/matches/demo/points/99/1/1").status_code == 404


def test_malformed_point_400(client):
    c, _ = client
    r = c.get("/api/matches/demo/points/one/1/1")
    assert r.status_code == 400
    assert r.json()["error"] == "bad_request"


def test_tag_filter(client):
    c, idx = client
    r = c.get("/api/matches/demo/segments", params={"tag": "deuce"})
    assert r.status_code == 200
    expected = [x.to_json() for x in idx.rallies if EventTag.DEUCE in x.tags]
    assert r.json() == expected
    assert expected  # the fixture walk reaches deuce


def test_unknown_tag_400(client):
    c, _ = client
    r = c.get("/api/matches/demo/segments", params={"tag": "ace"})
    assert r.status_code == 400


def test_segments_without_tag_lists_everything(client):
    c, idx = client
    r = c.get("/api/matches/demo/segments")
    assert len(r.json()) == len(idx.rallies)


def test_set_and_game_views(client):
    c, idx = client
    r = c.get("/api/matches/demo/sets/1")
    assert r.status_code == 200
    assert all(row["set_no"] == 1 for row in r.json())
    r = c.get("/api/matches/demo/sets/1/games/2")
    assert r.status_code == 200
    assert all(row["game_no"] == 2 for row in r.json())
    assert c.get("/api/matches/demo/sets/99").status_code == 404


def test_identical_requests_identical_bodies(client):
    c, _ = client
    a = c.get("/api/matches/demo/segments").content
    b = c.get("/api/matches/demo/segments").content
    assert a == b


def test_startup_fails_on_missing_index_dir(tmp_path):
    with pytest.raises(NotADirectoryError):
        create_app(ServiceConfig(index_dir=tmp_path / "nowhere"))


def test_responses_validate_against_index_schema(client, tmp_path):
    # every record body must reload through the index schema validator
    import json

    from matchdex.index import load_index

    c, idx = client
    rows = c.get("/api/matches/demo/segments").json()
    doc = {
        "match_id": "roundtrip",
        "format": {"best_of": 5},
        "fps": 30.0,
        "rallies": rows,
    }
    p = tmp_path / "echo.index.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    loaded = load_index(p)
    assert len(loaded.rallies) == len(idx.rallies)
