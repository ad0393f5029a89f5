import datetime as dt

import numpy as np
import pytest

from pitchside.historical import (ColdStartError, HistoryError, HistoryTracker,
                                  TeamMeta, build_historical_dataset,
                                  build_historical_vector, load_team_meta,
                                  running_averages, side_vector)
from pitchside.matches import MatchRecord, SideStats

UTC = dt.timezone.utc


def kickoff(day, hour=15):
    return dt.datetime(2013, 11, day, hour, tzinfo=UTC)


def match(match_id, day, home, away, home_stats, away_stats, hour=15):
    return MatchRecord(match_id=match_id, kickoff=kickoff(day, hour),
                       home=home, away=away,
                       home_stats=SideStats(*home_stats),
                       away_stats=SideStats(*away_stats))


META = {
    "redbridge": TeamMeta("redbridge", 220.0, 26.5, 14, 3, 2, 1),
    "silverton": TeamMeta("silverton", 95.0, 25.0, 6, 0, 1, 0),
    "grimsview": TeamMeta("grimsview", 41.0, 27.1, 2, 0, 0, 0),
}

META_CSV = """team,market_value,avg_age,intl,epl_wins,runners_up,doubles
redbridge,220.0,26.5,14,3,2,1
silverton,95.0,25.0,6,0,1,0
"""


# ---------------------------------------------------------------------------
# metadata


def test_load_team_meta(tmp_path):
    path = tmp_path / "meta.csv"
    path.write_text(META_CSV)
    meta = load_team_meta(path)
    assert set(meta) == {"redbridge", "silverton"}
    assert meta["redbridge"].market_value == 220.0
    assert meta["redbridge"].intl == 14
    assert meta["silverton"].as_vector() == (95.0, 25.0, 6.0, 0.0, 1.0, 0.0)


@pytest.mark.parametrize("body,fragment", [
    ("team,market_value\nredbridge,220\n", "expected columns"),
    (META_CSV + "redbridge,220.0,26.5,14,3,2,1\n", "duplicate team"),
    (META_CSV.replace("220.0", "plenty"), "could not convert"),
    (META_CSV.replace("redbridge", " "), "empty team id"),
    ("team,market_value,avg_age,intl,epl_wins,runners_up,doubles\n", "no teams"),
])
def test_load_team_meta_rejects(tmp_path, body, fragment):
    path = tmp_path / "meta.csv"
    path.write_text(body)
    with pytest.raises(HistoryError, match=fragment):
        load_team_meta(path)


def test_load_team_meta_missing_file(tmp_path):
    with pytest.raises(HistoryError, match="cannot read"):
        load_team_meta(tmp_path / "nope.csv")


def test_team_meta_validation():
    with pytest.raises(HistoryError):
        TeamMeta("x", 0.0, 25.0, 1, 0, 0, 0)
    with pytest.raises(HistoryError):
        TeamMeta("x", 10.0, 25.0, -1, 0, 0, 0)


# ---------------------------------------------------------------------------
# running averages


def test_tracker_hand_case():
    tracker = HistoryTracker()
    tracker.advance(match("m1", 2, "redbridge", "silverton",
                          (2, 6, 5, 11, 1, 0), (0, 3, 2, 14, 2, 1)))
    tracker.advance(match("m2", 9, "silverton", "redbridge",
                          (1, 5, 4, 9, 0, 0), (3, 7, 6, 13, 3, 1)))
    # redbridge played twice: goals (2+3)/2 etc, order matches SideStats
    assert running_averages("redbridge", tracker) == (2.5, 6.5, 5.5, 12.0, 2.0, 0.5)
    assert running_averages("silverton", tracker) == (0.5, 4.0, 3.0, 11.5, 1.0, 0.5)
    assert tracker.games_played("redbridge") == 2
    assert tracker.games_played("grimsview") == 0


def test_cold_start_raises():
    tracker = HistoryTracker()
    with pytest.raises(ColdStartError) as err:
        running_averages("redbridge", tracker)
    assert err.value.team == "redbridge"


def test_double_fold_rejected():
    tracker = HistoryTracker()
    m = match("m1", 2, "redbridge", "silverton", (1, 4, 3, 10, 1, 0),
              (0, 4, 3, 10, 1, 0))
    tracker.advance(m)
    with pytest.raises(HistoryError, match="already folded"):
        tracker.advance(m)


def test_snapshot_is_a_copy():
    tracker = HistoryTracker()
    tracker.advance(match("m1", 2, "redbridge", "silverton",
                          (1, 4, 3, 10, 1, 0), (0, 4, 3, 10, 1, 0)))
    snap = tracker.snapshot()
    snap["redbridge"][1] = 99
    assert running_averages("redbridge", tracker)[0] == 1.0


# ---------------------------------------------------------------------------
# vectors


def test_side_vector_layout():
    tracker = HistoryTracker()
    tracker.advance(match("m1", 2, "redbridge", "silverton",
                          (2, 6, 5, 11, 1, 0), (0, 3, 2, 14, 2, 1)))
    vec = side_vector("redbridge", META, tracker)
    assert vec == (2.0, 6.0, 5.0, 11.0, 1.0, 0.0, 220.0, 26.5, 14.0, 3.0, 2.0, 1.0)


def test_side_vector_requires_metadata():
    tracker = HistoryTracker()
    tracker.advance(match("m1", 2, "redbridge", "silverton",
                          (1, 4, 3, 10, 1, 0), (0, 4, 3, 10, 1, 0)))
    with pytest.raises(HistoryError, match="no metadata"):
        side_vector("unlisted", {}, tracker)


def test_match_vector_home_then_away():
    tracker = HistoryTracker()
    tracker.advance(match("m1", 2, "redbridge", "silverton",
                          (2, 6, 5, 11, 1, 0), (0, 3, 2, 14, 2, 1)))
    upcoming = match("m2", 9, "silverton", "redbridge",
                     (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0))
    vec = build_historical_vector(upcoming, META, tracker)
    assert vec.shape == (24,)
    # silverton is at home this time, so its twelve values come first
    np.testing.assert_allclose(vec[:6], [0.0, 3.0, 2.0, 14.0, 2.0, 1.0])
    np.testing.assert_allclose(vec[6:12], [95.0, 25.0, 6.0, 0.0, 1.0, 0.0])
    np.testing.assert_allclose(vec[12:18], [2.0, 6.0, 5.0, 11.0, 1.0, 0.0])
    np.testing.assert_allclose(vec[18:], [220.0, 26.5, 14.0, 3.0, 2.0, 1.0])


def test_dataset_walk_is_causal():
    # m2's vector must reflect only m1, not m2's own result
    matches = [
        match("m1", 2, "redbridge", "silverton",
              (2, 6, 5, 11, 1, 0), (0, 3, 2, 14, 2, 1)),
        match("m2", 9, "redbridge", "silverton",
              (5, 9, 9, 5, 0, 0), (5, 9, 9, 5, 0, 0)),
        match("m3", 16, "redbridge", "silverton",
              (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0)),
    ]
    vectors, excluded = build_historical_dataset(matches, META)
    assert excluded == ["m1"]
    np.testing.assert_allclose(vectors["m2"][:6], [2.0, 6.0, 5.0, 11.0, 1.0, 0.0])
    # by m3 both teams have two games folded in
    np.testing.assert_allclose(vectors["m3"][0], (2 + 5) / 2)
    np.testing.assert_allclose(vectors["m3"][12], (0 + 5) / 2)


def test_dataset_excludes_cold_sides_only():
    matches = [
        match("m1", 2, "redbridge", "silverton",
              (1, 4, 3, 10, 1, 0), (0, 4, 3, 10, 1, 0)),
        # grimsview debuts in m2: excluded even though redbridge has history
        match("m2", 9, "redbridge", "grimsview",
              (1, 4, 3, 10, 1, 0), (0, 4, 3, 10, 1, 0)),
        match("m3", 16, "grimsview", "silverton",
              (0, 4, 3, 10, 1, 0), (0, 4, 3, 10, 1, 0)),
    ]
    vectors, excluded = build_historical_dataset(matches, META)
    assert excluded == ["m1", "m2"]
    assert set(vectors) == {"m3"}


def test_seed_matches_remove_cold_start():
    seed = [match("s1", 1, "redbridge", "silverton",
                  (2, 6, 5, 11, 1, 0), (0, 3, 2, 14, 2, 1))]
    matches = [match("m1", 9, "redbridge", "silverton",
                     (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0))]
    vectors, excluded = build_historical_dataset(matches, META, seed_matches=seed)
    assert excluded == []
    np.testing.assert_allclose(vectors["m1"][:6], [2.0, 6.0, 5.0, 11.0, 1.0, 0.0])


def test_dataset_sorts_by_kickoff_not_input_order():
    matches = [
        match("late", 9, "redbridge", "silverton",
              (0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0)),
        match("early", 2, "redbridge", "silverton",
              (2, 6, 5, 11, 1, 0), (0, 3, 2, 14, 2, 1)),
    ]
    vectors, excluded = build_historical_dataset(matches, META)
    assert excluded == ["early"]
    np.testing.assert_allclose(vectors["late"][0], 2.0)
