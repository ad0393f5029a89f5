"""Tweet stream ingestion: team assignment, discard rules, match bucketing.

Input is newline-delimited JSON, one record per line with fields ``id``,
``ts`` (ISO-8601 UTC), ``text`` and optional ``tags``. Output is one
document per (match, side) holding that side's pre-kickoff tweets, plus
exact bookkeeping: every record lands in exactly one of assigned /
no-team / multi-team / ambiguous / out-of-window / malformed.

Results are a pure function of the record multiset: file order, record
order and worker count never change the output.
"""

import bisect
import hashlib
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta

from .matches import Side, parse_timestamp

HASHTAG_RE = re.compile(r"#\w+")

# Record categories. Every parsed record is counted under exactly one.
ASSIGNED = "assigned"
NO_TEAM = "no-team"
MULTI_TEAM = "multi-team"
AMBIGUOUS = "ambiguous"
OUT_OF_WINDOW = "out-of-window"
MALFORMED = "malformed"

_DISCARD_CATEGORIES = (NO_TEAM, MULTI_TEAM, AMBIGUOUS, OUT_OF_WINDOW)

_MALFORMED_SAMPLE_CAP = 50


class IngestError(ValueError):
    """Fatal ingestion problem (bad lexicon, unreadable file, schedule anomaly)."""


class LexiconError(IngestError):
    """Lexicon file failed validation."""


@dataclass(frozen=True)
class TweetRecord:
    """One timestamped text document from the input stream."""

    id: str
    ts: datetime
    text: str
    tags: tuple | None = None


@dataclass(frozen=True)
class TeamLexicon:
    """Team to hashtag-set mapping plus cross-sport ambiguity rules.

    ``blocklist`` holds (hashtag, keyword) pairs: a tweet whose single
    matched team came via that hashtag is discarded when the keyword also
    occurs in the text (e.g. ``#saints`` together with ``superbowl``).
    """

    teams: dict
    blocklist: tuple = ()

    def __post_init__(self):
        owner = {}
        for team, tags in self.teams.items():
            if not tags:
                raise LexiconError(f"team {team!r} has no hashtags")
            for tag in tags:
                if not tag.startswith("#") or tag != tag.lower():
                    raise LexiconError(f"bad hashtag {tag!r} for team {team!r}"
                                       " (must be lowercase and start with '#')")
                if tag in owner:
                    raise LexiconError(
                        f"hashtag {tag!r} is claimed by both {owner[tag]!r} and {team!r}")
                owner[tag] = team
        object.__setattr__(self, "_hashtag_owner", owner)
        rules = []
        for tag, keyword in self.blocklist:
            if not tag.startswith("#"):
                raise LexiconError(f"blocklist entry {tag!r} must be a hashtag")
            rules.append((tag.lower(), keyword.lower(),
                          re.compile(r"\b" + re.escape(keyword.lower()) + r"\b")))
        object.__setattr__(self, "_blocklist_rules", tuple(rules))

    @property
    def hashtag_owner(self) -> dict:
        return self._hashtag_owner


def load_lexicon(path) -> TeamLexicon:
    """Parse a lexicon file.

    Format: optional ``[teams]`` / ``[blocklist]`` section headers; team
    lines are ``team_id #tag1 #tag2 ...``; blocklist lines are
    ``#tag keyword``. Lines starting with ';' are comments. Hashtags are
    lowercased on load.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc

    teams = {}
    blocklist = []
    section = "teams"
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("teams", "blocklist"):
                raise LexiconError(f"{path}:{lineno}: unknown section [{section}]")
            continue
        fields = line.split()
        if section == "teams":
            team, tags = fields[0], fields[1:]
            if team.startswith("#"):
                raise LexiconError(f"{path}:{lineno}: team id {team!r} looks like a hashtag")
            if team in teams:
                raise LexiconError(f"{path}:{lineno}: team {team!r} defined twice")
            if not tags:
                raise LexiconError(f"{path}:{lineno}: team {team!r} has no hashtags")
            for tag in tags:
                if not tag.startswith("#"):
                    raise LexiconError(f"{path}:{lineno}: {tag!r} is not a hashtag")
            teams[team] = frozenset(tag.lower() for tag in tags)
        else:
            if len(fields) != 2:
                raise LexiconError(f"{path}:{lineno}: blocklist line needs"
                                   f" '#hashtag keyword', got {line!r}")
            blocklist.append((fields[0].lower(), fields[1].lower()))
    if not teams:
        raise LexiconError(f"{path}: no teams defined")
    return TeamLexicon(teams=teams, blocklist=tuple(blocklist))


@dataclass(frozen=True)
class TeamAssignment:
    """Result of matching one tweet against the lexicon."""

    team: str | None
    reason: str  # ASSIGNED or one of the discard categories

    @property
    def assigned(self) -> bool:
        return self.reason == ASSIGNED


def assign_team(tweet: TweetRecord, lexicon: TeamLexicon) -> TeamAssignment:
    """Assign a tweet to the single team whose hashtags it contains.

    Discards when no team matches, when two or more teams match, or when a
    blocklist (hashtag, keyword) rule fires on the single matched team.
    """
    text = tweet.text.lower()
    found = set(HASHTAG_RE.findall(text))
    owner = lexicon.hashtag_owner
    teams = {owner[tag] for tag in found if tag in owner}
    if not teams:
        return TeamAssignment(None, NO_TEAM)
    if len(teams) > 1:
        return TeamAssignment(None, MULTI_TEAM)
    for tag, _, keyword_re in lexicon._blocklist_rules:
        if tag in found and keyword_re.search(text):
            return TeamAssignment(None, AMBIGUOUS)
    return TeamAssignment(teams.pop(), ASSIGNED)


@dataclass(frozen=True)
class WindowPolicy:
    """How tweets map to a team's matches.

    The default window is the half-open [kickoff - lookback, kickoff),
    clipped so it never reaches back past the team's previous match plus
    ``post_gap``. With ``include_post_kickoff`` the window extends to
    kickoff + post_gap instead of ending at kickoff.
    """

    lookback: timedelta = timedelta(days=7)
    include_post_kickoff: bool = False
    post_gap: timedelta = timedelta(hours=3)


class MatchWindows:
    """Precomputed per-team assignment windows over a schedule."""

    def __init__(self, schedule, policy: WindowPolicy = WindowPolicy()):
        self.policy = policy
        per_team = {}
        for match in sorted(schedule, key=lambda m: (m.kickoff, m.match_id)):
            for side in (Side.HOME, Side.AWAY):
                per_team.setdefault(match.team(side), []).append((match, side))
        self._windows = {}
        for team, fixtures in per_team.items():
            starts, ends, rows = [], [], []
            prev_kickoff = None
            for match, side in fixtures:
                start = match.kickoff - policy.lookback
                if prev_kickoff is not None:
                    clip = prev_kickoff + policy.post_gap
                    if clip > start:
                        start = clip
                end = match.kickoff
                if policy.include_post_kickoff:
                    end = match.kickoff + policy.post_gap
                prev_kickoff = match.kickoff
                if start >= end:
                    continue  # degenerate (congested fixtures): no window
                if ends and start < ends[-1]:
                    raise IngestError(
                        f"overlapping assignment windows for team {team!r}"
                        f" around match {match.match_id!r}")
                starts.append(start)
                ends.append(end)
                rows.append((match.match_id, side))
            self._windows[team] = (starts, ends, rows)

    def lookup(self, team: str, ts: datetime):
        """Return (match_id, side) whose window contains ts, or None."""
        entry = self._windows.get(team)
        if entry is None:
            return None
        starts, ends, rows = entry
        i = bisect.bisect_right(starts, ts) - 1
        if i >= 0 and ts < ends[i]:
            return rows[i]
        return None


def assign_match(tweet: TweetRecord, team: str, schedule, policy: WindowPolicy = WindowPolicy()):
    """Return the (match_id, side) of ``team`` whose window contains the tweet.

    Convenience wrapper that builds the window index per call; bulk
    ingestion precomputes a MatchWindows once.
    """
    return MatchWindows(schedule, policy).lookup(team, tweet.ts)


@dataclass(frozen=True)
class MatchSideDocument:
    """All tweets assigned to one side of one match.

    ``tweets`` holds (id, text, tags) triples sorted by (timestamp, id);
    ``tokens`` is populated by text preparation.
    """

    match_id: str
    side: Side
    team: str
    tweets: tuple
    tokens: tuple | None = None

    @property
    def tweet_count(self) -> int:
        return len(self.tweets)


@dataclass
class IngestStats:
    """Exact bookkeeping for one ingestion run."""

    total: int = 0
    assigned: int = 0
    no_team: int = 0
    multi_team: int = 0
    ambiguous: int = 0
    out_of_window: int = 0
    malformed: int = 0
    per_team: dict = field(default_factory=dict)
    malformed_samples: tuple = ()

    def check_partition(self) -> bool:
        return self.total == (self.assigned + self.no_team + self.multi_team
                              + self.ambiguous + self.out_of_window + self.malformed)

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "assigned": self.assigned,
            "no_team": self.no_team,
            "multi_team": self.multi_team,
            "ambiguous": self.ambiguous,
            "out_of_window": self.out_of_window,
            "malformed": self.malformed,
            "per_team": dict(sorted(self.per_team.items())),
            "malformed_samples": [list(s) for s in self.malformed_samples],
        }


def _sort_key(epoch_us: int, text: str) -> tuple:
    """Content-only ordering key used to resolve duplicate ids."""
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return (epoch_us, digest)


class _Accumulator:
    """Mergeable per-shard ingestion state.

    ``seen`` maps tweet id -> (sort key, category, doc key) and makes the
    run independent of record order: when an id occurs twice, the record
    with the smaller (timestamp, text-digest) key survives and the other
    is counted as malformed, whatever order they arrived in.
    """

    def __init__(self):
        self.counts = {NO_TEAM: 0, MULTI_TEAM: 0, AMBIGUOUS: 0, OUT_OF_WINDOW: 0}
        self.malformed = 0
        self.samples = []
        self.total = 0
        self.seen = {}
        self.docs = {}  # (match_id, side) -> {id: (epoch_us, text, tags, team)}

    def add_malformed(self, path: str, lineno: int, reason: str):
        self.total += 1
        self.malformed += 1
        self.samples.append((path, lineno, reason))

    def add_record(self, rec_id, epoch_us, text, tags, category, dockey, team,
                   path, lineno):
        self.total += 1
        key = _sort_key(epoch_us, text)
        previous = self.seen.get(rec_id)
        if previous is not None:
            if key >= previous[0]:
                # this record loses; count it and keep the earlier one
                self.malformed += 1
                self.samples.append((path, lineno, "duplicate-id"))
                return
            self._demote(rec_id, previous, path, lineno)
        self.seen[rec_id] = (key, category, dockey)
        self._count(rec_id, epoch_us, text, tags, category, dockey, team)

    def _count(self, rec_id, epoch_us, text, tags, category, dockey, team):
        if category == ASSIGNED:
            self.docs.setdefault(dockey, {})[rec_id] = (epoch_us, text, tags, team)
        else:
            self.counts[category] += 1

    def _demote(self, rec_id, entry, path, lineno):
        _, category, dockey = entry
        if category == ASSIGNED:
            del self.docs[dockey][rec_id]
        else:
            self.counts[category] -= 1
        self.malformed += 1
        self.samples.append((path, lineno, "duplicate-id"))

    def merge(self, other: "_Accumulator"):
        # resolve cross-shard duplicate ids before blind union
        for rec_id, theirs in other.seen.items():
            ours = self.seen.get(rec_id)
            if ours is None:
                continue
            if theirs[0] < ours[0]:
                self._demote(rec_id, ours, "<merge>", 0)
                del self.seen[rec_id]
            else:
                other._demote(rec_id, theirs, "<merge>", 0)
                del other.seen[rec_id]
        for category, count in other.counts.items():
            self.counts[category] += count
        self.malformed += other.malformed
        self.samples.extend(other.samples)
        self.total += other.total
        self.seen.update(other.seen)
        for dockey, entries in other.docs.items():
            self.docs.setdefault(dockey, {}).update(entries)

    def finalize(self, lexicon: TeamLexicon):
        documents = []
        per_team = {team: 0 for team in lexicon.teams}
        assigned = 0
        for (match_id, side), entries in sorted(
                self.docs.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            if not entries:
                continue
            rows = sorted(entries.items(), key=lambda kv: (kv[1][0], kv[0]))
            team = rows[0][1][3]
            tweets = tuple((rec_id, text, tags) for rec_id, (_, text, tags, _) in rows)
            documents.append(MatchSideDocument(match_id=match_id, side=side,
                                               team=team, tweets=tweets))
            per_team[team] += len(tweets)
            assigned += len(tweets)
        stats = IngestStats(
            total=self.total,
            assigned=assigned,
            no_team=self.counts[NO_TEAM],
            multi_team=self.counts[MULTI_TEAM],
            ambiguous=self.counts[AMBIGUOUS],
            out_of_window=self.counts[OUT_OF_WINDOW],
            malformed=self.malformed,
            per_team=per_team,
            malformed_samples=tuple(sorted(self.samples)[:_MALFORMED_SAMPLE_CAP]),
        )
        if not stats.check_partition():
            raise AssertionError("ingestion partition violated (internal bug): "
                                 f"{stats.as_dict()}")
        return documents, stats


def _classify_line(line: str, lexicon, windows):
    """Parse and classify one NDJSON line.

    Returns (id, epoch_us, text, tags, category, dockey, team) or raises
    ValueError with the malformed reason.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        raise ValueError("bad-json")
    if not isinstance(obj, dict):
        raise ValueError("not-an-object")
    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        raise ValueError("missing-id")
    ts_raw = obj.get("ts")
    if not isinstance(ts_raw, str):
        raise ValueError("missing-ts")
    try:
        ts = parse_timestamp(ts_raw)
    except ValueError:
        raise ValueError("bad-timestamp")
    text = obj.get("text")
    if not isinstance(text, str):
        raise ValueError("missing-text")
    tags_raw = obj.get("tags")
    tags = None
    if tags_raw is not None:
        if not isinstance(tags_raw, list):
            raise ValueError("bad-tags")
        try:
            tags = tuple((str(tok), str(tag)) for tok, tag in tags_raw)
        except (TypeError, ValueError):
            raise ValueError("bad-tags")

    lowered = text.lower()
    found = set(HASHTAG_RE.findall(lowered))
    owner = lexicon.hashtag_owner
    teams = {owner[tag] for tag in found if tag in owner}
    epoch_us = round(ts.timestamp() * 1_000_000)
    if not teams:
        return rec_id, epoch_us, text, tags, NO_TEAM, None, None
    if len(teams) > 1:
        return rec_id, epoch_us, text, tags, MULTI_TEAM, None, None
    for tag, _, keyword_re in lexicon._blocklist_rules:
        if tag in found and keyword_re.search(lowered):
            return rec_id, epoch_us, text, tags, AMBIGUOUS, None, None
    team = next(iter(teams))
    dockey = windows.lookup(team, ts)
    if dockey is None:
        return rec_id, epoch_us, text, tags, OUT_OF_WINDOW, None, team
    return rec_id, epoch_us, text, tags, ASSIGNED, dockey, team


def _ingest_paths(paths, lexicon, windows) -> _Accumulator:
    acc = _Accumulator()
    for path in paths:
        path_str = str(path)
        try:
            handle = open(path, "rb")
        except OSError as exc:
            raise IngestError(f"cannot read tweet file {path}: {exc}") from exc
        with handle:
            for lineno, raw in enumerate(handle, 1):
                stripped = raw.strip()
                if not stripped:
                    continue
                try:
                    line = stripped.decode("utf-8")
                except UnicodeDecodeError:
                    acc.add_malformed(path_str, lineno, "bad-encoding")
                    continue
                try:
                    parsed = _classify_line(line, lexicon, windows)
                except ValueError as exc:
                    acc.add_malformed(path_str, lineno, str(exc))
                    continue
                rec_id, epoch_us, text, tags, category, dockey, team = parsed
                acc.add_record(rec_id, epoch_us, text, tags, category, dockey,
                               team, path_str, lineno)
    return acc


def _ingest_task(args):
    paths, lexicon, schedule, policy = args
    return _ingest_paths(paths, lexicon, MatchWindows(schedule, policy))


def ingest_corpus(paths, lexicon, schedule, policy: WindowPolicy = WindowPolicy(),
                  workers: int = 1):
    """Ingest tweet files into (match, side) documents plus exact stats.

    Output is identical for any file order, record order and worker count.
    Malformed records are counted and skipped, never fatal; unreadable
    files are fatal.
    """
    paths = sorted(str(p) for p in paths)
    if workers <= 1 or len(paths) <= 1:
        acc = _ingest_paths(paths, lexicon, MatchWindows(schedule, policy))
    else:
        chunks = [paths[i::workers] for i in range(workers)]
        chunks = [c for c in chunks if c]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_ingest_task,
                                  [(c, lexicon, schedule, policy) for c in chunks]))
        acc = parts[0]
        for part in parts[1:]:
            acc.merge(part)
    return acc.finalize(lexicon)
