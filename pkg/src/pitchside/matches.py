"""Match schedule records: fixtures, full-time results and per-side counting stats."""

import csv
import enum
from dataclasses import dataclass
from datetime import datetime, timezone


class ScheduleError(ValueError):
    """Raised when a schedule/results file fails validation."""


class Outcome(enum.IntEnum):
    """Full-time result, seen from the home side.

    The integer values fix the class order (HOME_WIN < DRAW < AWAY_WIN)
    used for deterministic tie-breaking throughout the package.
    """

    HOME_WIN = 0
    DRAW = 1
    AWAY_WIN = 2

    @property
    def label(self) -> str:
        return _OUTCOME_LABELS[self]

    @classmethod
    def from_goals(cls, goals_home: int, goals_away: int) -> "Outcome":
        if goals_home > goals_away:
            return cls.HOME_WIN
        if goals_home < goals_away:
            return cls.AWAY_WIN
        return cls.DRAW


_OUTCOME_LABELS = {
    Outcome.HOME_WIN: "home_win",
    Outcome.DRAW: "draw",
    Outcome.AWAY_WIN: "away_win",
}

CLASSES = (Outcome.HOME_WIN, Outcome.DRAW, Outcome.AWAY_WIN)


class Side(enum.Enum):
    HOME = "home"
    AWAY = "away"


@dataclass(frozen=True)
class SideStats:
    """The six per-side counting statistics of one match."""

    goals: int
    corners: int
    shots_on_target: int
    fouls: int
    yellows: int
    reds: int

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if value < 0:
                raise ScheduleError(f"negative {name}: {value}")

    def as_tuple(self) -> tuple:
        return (self.goals, self.corners, self.shots_on_target,
                self.fouls, self.yellows, self.reds)

    def as_dict(self) -> dict:
        return {
            "goals": self.goals,
            "corners": self.corners,
            "shots_on_target": self.shots_on_target,
            "fouls": self.fouls,
            "yellows": self.yellows,
            "reds": self.reds,
        }


@dataclass(frozen=True)
class MatchRecord:
    """One fixture with kickoff time, full-time stats and derived outcome."""

    match_id: str
    kickoff: datetime
    home: str
    away: str
    home_stats: SideStats
    away_stats: SideStats

    def __post_init__(self):
        if not self.match_id:
            raise ScheduleError("empty match_id")
        if self.home == self.away:
            raise ScheduleError(f"match {self.match_id}: home and away are both {self.home!r}")
        if self.kickoff.tzinfo is None:
            raise ScheduleError(f"match {self.match_id}: kickoff must be timezone-aware")

    @property
    def outcome(self) -> Outcome:
        return Outcome.from_goals(self.home_stats.goals, self.away_stats.goals)

    def team(self, side: Side) -> str:
        return self.home if side is Side.HOME else self.away

    def stats(self, side: Side) -> SideStats:
        return self.home_stats if side is Side.HOME else self.away_stats

    def side_of(self, team: str) -> Side:
        if team == self.home:
            return Side.HOME
        if team == self.away:
            return Side.AWAY
        raise ValueError(f"{team!r} does not play in match {self.match_id}")


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp and normalize it to UTC.

    Accepts a trailing 'Z' as well as explicit offsets; naive timestamps
    are rejected.
    """
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ValueError(f"unparseable timestamp {value!r}") from exc
    if ts.tzinfo is None:
        raise ValueError(f"timestamp {value!r} has no UTC offset")
    return ts.astimezone(timezone.utc)


SCHEDULE_COLUMNS = [
    "match_id", "kickoff", "home", "away",
    "goals_h", "goals_a", "corners_h", "corners_a", "sot_h", "sot_a",
    "fouls_h", "fouls_a", "yellow_h", "yellow_a", "red_h", "red_a",
]


def load_schedule(path) -> list:
    """Load a schedule/results CSV, sorted by kickoff then match id.

    Duplicate match ids and malformed rows are fatal: the schedule is a
    small, curated input and silent repair would corrupt every downstream
    running-average feature.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise ScheduleError(f"{path}: empty schedule file")
        missing = [c for c in SCHEDULE_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ScheduleError(f"{path}: missing columns {missing}")
        matches = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            try:
                record = _parse_schedule_row(row)
            except (ScheduleError, ValueError) as exc:
                raise ScheduleError(f"{path}:{lineno}: {exc}") from exc
            if record.match_id in seen:
                raise ScheduleError(f"{path}:{lineno}: duplicate match_id {record.match_id!r}")
            seen.add(record.match_id)
            matches.append(record)
    matches.sort(key=lambda m: (m.kickoff, m.match_id))
    return matches


def _parse_schedule_row(row: dict) -> MatchRecord:
    def ints(*names):
        return [int(row[n]) for n in names]

    home_stats = SideStats(*ints("goals_h", "corners_h", "sot_h", "fouls_h", "yellow_h", "red_h"))
    away_stats = SideStats(*ints("goals_a", "corners_a", "sot_a", "fouls_a", "yellow_a", "red_a"))
    return MatchRecord(
        match_id=row["match_id"].strip(),
        kickoff=parse_timestamp(row["kickoff"]),
        home=row["home"].strip(),
        away=row["away"].strip(),
        home_stats=home_stats,
        away_stats=away_stats,
    )


def write_schedule(path, matches) -> None:
    """Write matches back out in the schedule CSV schema (used by generators)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SCHEDULE_COLUMNS)
        for m in matches:
            h, a = m.home_stats, m.away_stats
            writer.writerow([
                m.match_id, m.kickoff.strftime("%Y-%m-%dT%H:%M:%SZ"), m.home, m.away,
                h.goals, a.goals, h.corners, a.corners,
                h.shots_on_target, a.shots_on_target,
                h.fouls, a.fouls, h.yellows, a.yellows, h.reds, a.reds,
            ])
