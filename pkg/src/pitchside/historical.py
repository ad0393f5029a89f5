"""Per-match historical feature vectors.

Each side of a match contributes twelve values: six per-game running
averages (goals, corners, shots on target, fouls, yellow cards, red
cards) computed strictly from that team's earlier matches, plus six
static club attributes (market value, squad age, international players,
league titles, runner-up finishes, league-and-cup doubles). A match where
either team has no prior history cannot be vectorized; callers decide
whether to seed history from earlier results or drop the match.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .matches import MatchRecord, Side

TEAM_META_COLUMNS = ["team", "market_value", "avg_age", "intl",
                     "epl_wins", "runners_up", "doubles"]

RUNNING_STATS = 6  # goals, corners, shots on target, fouls, yellows, reds
VECTOR_WIDTH = 24  # 12 per side


class HistoryError(ValueError):
    """Fatal historical-data problem (bad meta file, duplicate fold)."""


class ColdStartError(HistoryError):
    """A team has no prior matches to average over."""

    def __init__(self, team: str):
        super().__init__(f"no prior matches for team {team!r}")
        self.team = team


@dataclass(frozen=True)
class TeamMeta:
    """Static club attributes for one team."""

    team: str
    market_value: float
    avg_age: float
    intl: int
    epl_wins: int
    runners_up: int
    doubles: int

    def __post_init__(self):
        if self.market_value <= 0:
            raise HistoryError(f"market value must be positive for {self.team!r}")
        for name in ("avg_age", "intl", "epl_wins", "runners_up", "doubles"):
            if getattr(self, name) < 0:
                raise HistoryError(f"{name} must be nonnegative for {self.team!r}")

    def as_vector(self) -> tuple:
        return (self.market_value, self.avg_age, float(self.intl),
                float(self.epl_wins), float(self.runners_up), float(self.doubles))


def load_team_meta(path) -> dict:
    """Load the team metadata CSV into a team -> TeamMeta map."""
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != TEAM_META_COLUMNS:
                raise HistoryError(f"{path}: expected columns {TEAM_META_COLUMNS},"
                                   f" got {reader.fieldnames}")
            meta = {}
            for lineno, row in enumerate(reader, 2):
                team = row["team"].strip()
                if not team:
                    raise HistoryError(f"{path}:{lineno}: empty team id")
                if team in meta:
                    raise HistoryError(f"{path}:{lineno}: duplicate team {team!r}")
                try:
                    meta[team] = TeamMeta(
                        team=team,
                        market_value=float(row["market_value"]),
                        avg_age=float(row["avg_age"]),
                        intl=int(row["intl"]),
                        epl_wins=int(row["epl_wins"]),
                        runners_up=int(row["runners_up"]),
                        doubles=int(row["doubles"]),
                    )
                except (TypeError, ValueError) as exc:
                    raise HistoryError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise HistoryError(f"cannot read team metadata {path}: {exc}") from exc
    if not meta:
        raise HistoryError(f"{path}: no teams defined")
    return meta


class HistoryTracker:
    """Running per-team sums of the six counting statistics.

    Matches must be folded in chronological order; vector building for a
    match reads only state advanced from strictly earlier matches.
    """

    def __init__(self):
        self._sums = {}  # team -> [games, goals, corners, sot, fouls, yellows, reds]
        self._folded = set()

    def games_played(self, team: str) -> int:
        entry = self._sums.get(team)
        return 0 if entry is None else entry[0]

    def averages(self, team: str) -> tuple:
        """Per-game averages of the six counting statistics.

        Raises ColdStartError when the team has no folded matches yet.
        """
        entry = self._sums.get(team)
        if entry is None or entry[0] == 0:
            raise ColdStartError(team)
        games = entry[0]
        return tuple(value / games for value in entry[1:])

    def advance(self, match: MatchRecord):
        """Fold one finished match into both teams' running sums."""
        if match.match_id in self._folded:
            raise HistoryError(f"match {match.match_id!r} already folded into history")
        self._folded.add(match.match_id)
        for side in (Side.HOME, Side.AWAY):
            team = match.team(side)
            stats = match.stats(side).as_tuple()
            entry = self._sums.setdefault(team, [0] * (1 + RUNNING_STATS))
            entry[0] += 1
            for i, value in enumerate(stats, 1):
                entry[i] += value

    def snapshot(self) -> dict:
        """Plain-dict copy of the running sums, for reports and tests."""
        return {team: list(entry) for team, entry in self._sums.items()}


def running_averages(team: str, tracker: HistoryTracker) -> tuple:
    """The six running averages for one team; ColdStartError if no history."""
    return tracker.averages(team)


def side_vector(team: str, meta: dict, tracker: HistoryTracker) -> tuple:
    """Twelve historical values for one team: running averages then statics."""
    if team not in meta:
        raise HistoryError(f"no metadata for team {team!r}")
    return tracker.averages(team) + meta[team].as_vector()


def build_historical_vector(match: MatchRecord, meta: dict,
                            tracker: HistoryTracker) -> np.ndarray:
    """24-value vector [home F1..F12, away F1..F12] for one upcoming match.

    The tracker must not yet contain this match; cold-start sides raise
    ColdStartError and missing metadata raises HistoryError.
    """
    home = side_vector(match.home, meta, tracker)
    away = side_vector(match.away, meta, tracker)
    vector = np.array(home + away, dtype=np.float64)
    if not np.all(np.isfinite(vector)):
        raise HistoryError(f"non-finite historical vector for match {match.match_id!r}")
    return vector


def build_historical_dataset(matches, meta: dict, seed_matches=()):
    """Historical vectors for a schedule, walked in kickoff order.

    ``seed_matches`` are earlier results folded in before the first
    vector is built, so teams are not cold at the window start. Returns
    (vectors by match-id, excluded match-ids), where excluded matches are
    those with a cold-start side.
    """
    tracker = HistoryTracker()
    for match in sorted(seed_matches, key=lambda m: (m.kickoff, m.match_id)):
        tracker.advance(match)
    vectors = {}
    excluded = []
    for match in sorted(matches, key=lambda m: (m.kickoff, m.match_id)):
        try:
            vectors[match.match_id] = build_historical_vector(match, meta, tracker)
        except ColdStartError:
            excluded.append(match.match_id)
        tracker.advance(match)
    return vectors, excluded
