"""Synthetic corpus generators with exact ground truth.

Three generators, all deterministic in their seed:

- ``generate_stream_corpus``: millions of tweet records across shard
  files, with exact expected ingestion counts per category and per team.
- ``generate_planted_corpus``: a small league whose home/away documents
  carry known discriminative bigrams, for end-to-end recoverability
  tests.
- ``generate_complementary_corpus``: tweet signal and historical signal
  carrying independent information about the outcome, for paired
  dataset comparisons.

File layouts are plain: lexicon.txt, schedule.csv, team_meta.csv,
prior_results.csv, tweets-NNN.ndjson and truth.json in one directory.
"""

import json
import os
import random
from datetime import datetime, timedelta, timezone

from .matches import MatchRecord, SideStats, write_schedule
from .util import atomic_write_json

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

LOOKBACK = timedelta(days=7)
POST_GAP = timedelta(hours=3)

# background vocabulary: mostly content words, a few closed-class fillers
# Filler vocabulary for synthetic tweets. Kept deliberately wide so that
# chance word pairs rarely repeat across documents and fall under any
# sensible document-frequency floor, leaving planted pairs unchallenged.
# None of these words appears inside a planted pair.
_VOCAB = tuple(dict.fromkeys((
    "match day squad keeper winger derby goal chance corner tackle header "
    "cross volley press bench boss crowd chant pitch grass rain sun pint pub "
    "train travel ticket kit shirt badge flag song half minute ref var "
    "passion glory dream form table point haul run streak test clash battle "
    "fight spirit heart class touch skill pace power shape line block "
    "save strike curl drill nut roof bar post net box spot edge wing flank "
    "anthem scarf banner stand gate turnstile programme stadium tunnel "
    "room warmup whistle stoppage injury sub cap armband captain skipper "
    "gaffer physio scout academy youth loan transfer deadline fee wage "
    "contract agent chairman owner board faithful end section seat view pie "
    "tea coffee burger chip queue bus metro station walk stroll drive park "
    "traffic weather wind cloud fog frost winter spring autumn summer night "
    "evening noon morning week season fixture replay cup league round tie "
    "leg final semi quarter group stage playoff promotion relegation trophy "
    "silver medal honour record history legend icon hero villain rival "
    "neighbour city town north south east west bridge river road lane "
    "street alley square clock tower hall court school college work shift "
    "office desk phone radio telly stream feed app site page thread banter "
    "scenes limbs noise racket buzz vibe mood nerves hope faith belief "
    "doubt worry relief joy pride ache grit graft effort energy legs lungs "
    "engine motor turbo gear brake pedal lamp beam torch spark flame ember "
    "coal steel iron brass copper stone brick slate tile rafter plank "
    "ladder rope chain hook anchor mast sail deck cabin berth quay dock "
    "pier wharf tide wave foam spray mist dew puddle mud boot stud lace "
    "sock glove cone bib vest routine rondo pressing marking tracking "
    "sprint jog cooldown stretcher flare smoke confetti drum horn bell "
    "trumpet pennant placard poster sticker pin patch crest motto creed "
    "oath vow pledge pact bond trust unity core spine wall shield guard "
    "sentry watch patrol beat orbit lap circuit loop arc curve bend sweep "
    "angle slot gap pocket channel seam twine needle stitch weave knit "
    "the a an and of to in on for with we our they it is was be will at this"
).split()))

_EXTRA_HASHTAGS = ("#football", "#footy", "#matchday", "#lol", "#nowplaying")


def _iso(ts: datetime, style: int = 0) -> str:
    base = ts.strftime("%Y-%m-%dT%H:%M:%S")
    return base + ("Z" if style == 0 else "+00:00")


def _phrase(rng: random.Random, n_words: int) -> list:
    return [rng.choice(_VOCAB) for _ in range(n_words)]


def _team_windows(matches):
    """Per-team tweet-safe windows mirroring the default window policy,
    with a one-second margin inside every boundary."""
    fixtures = {}
    for match in sorted(matches, key=lambda m: (m.kickoff, m.match_id)):
        fixtures.setdefault(match.home, []).append((match, "home"))
        fixtures.setdefault(match.away, []).append((match, "away"))
    windows = {}
    for team, rows in fixtures.items():
        out = []
        prev = None
        for match, side in rows:
            start = match.kickoff - LOOKBACK
            if prev is not None and prev + POST_GAP > start:
                start = prev + POST_GAP
            end = match.kickoff
            prev = match.kickoff
            safe_start = start + timedelta(seconds=1)
            safe_end = end - timedelta(seconds=1)
            if safe_start >= safe_end:
                continue
            out.append((match, side, safe_start, safe_end))
        windows[team] = out
    return windows


def _rand_instant(rng: random.Random, start: datetime, end: datetime) -> datetime:
    span = int((end - start).total_seconds())
    return start + timedelta(seconds=rng.randrange(span + 1))


def _write_lexicon(path, teams: dict, blocklist=()):
    lines = ["; synthetic lexicon", "[teams]"]
    for team in sorted(teams):
        lines.append(team + " " + " ".join(sorted(teams[team])))
    if blocklist:
        lines.append("[blocklist]")
        for tag, keyword in blocklist:
            lines.append(f"{tag} {keyword}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def _write_meta(path, rows):
    header = "team,market_value,avg_age,intl,epl_wins,runners_up,doubles"
    lines = [header]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def _stats(rng: random.Random, goals: int) -> SideStats:
    return SideStats(
        goals=goals,
        corners=rng.randrange(0, 12),
        shots_on_target=goals + rng.randrange(0, 7),
        fouls=rng.randrange(4, 16),
        yellows=rng.randrange(0, 5),
        reds=1 if rng.random() < 0.06 else 0,
    )


_GOALS_BY_OUTCOME = {
    0: [(1, 0), (2, 0), (2, 1), (3, 1), (4, 1)],   # home win
    1: [(0, 0), (1, 1), (2, 2)],                   # draw
    2: [(0, 1), (0, 2), (1, 2), (1, 3)],           # away win
}


def _weekly_schedule(teams, outcomes, start: datetime, rng: random.Random,
                     prefix: str):
    """One match per team per week, staggered kickoffs, given outcomes."""
    teams = list(teams)
    matches = []
    slot_hours = (12, 15, 17)
    week = 0
    i = 0
    while i < len(outcomes):
        order = teams[:]
        rng.shuffle(order)
        pairs = [(order[j], order[j + 1]) for j in range(0, len(order) - 1, 2)]
        for slot, (home, away) in enumerate(pairs):
            if i >= len(outcomes):
                break
            kickoff = start + timedelta(days=7 * week,
                                        hours=slot_hours[slot % 3],
                                        minutes=30 * (slot // 3))
            outcome = outcomes[i]
            goals_h, goals_a = rng.choice(_GOALS_BY_OUTCOME[outcome])
            home_stats = _stats(rng, goals_h)
            away_stats = _stats(rng, goals_a)
            matches.append(MatchRecord(
                match_id=f"{prefix}{i + 1:03d}",
                kickoff=kickoff,
                home=home,
                away=away,
                home_stats=home_stats,
                away_stats=away_stats,
            ))
            i += 1
        week += 1
    return matches


# ---------------------------------------------------------------------------
# large ingestion stream


def generate_stream_corpus(out_dir, n_records: int = 2_000_000,
                           n_files: int = 8, seed: int = 0,
                           n_teams: int = 20, n_weeks: int = 6) -> dict:
    """Write a sharded NDJSON stream plus exact expected ingestion stats.

    Every record is constructed to land in a known category; duplicated
    ids always carry a strictly later timestamp than the original, so
    the duplicate (not the original) is the discarded one regardless of
    processing order. Ground truth is returned and written to truth.json.
    """
    rng = random.Random(seed)
    os.makedirs(out_dir, exist_ok=True)
    teams = [f"team{i:02d}" for i in range(1, n_teams + 1)]
    lexicon = {t: {f"#{t}", f"#{t}fc"} for t in teams}
    # one club gets a nickname shared with another sport
    lexicon[teams[6 % n_teams]].add("#pirates")
    blocklist = (("#pirates", "superbowl"),)

    season_start = datetime(2013, 9, 7, 12, 0, tzinfo=timezone.utc)
    outcomes = [rng.randrange(3) for _ in range(n_weeks * (n_teams // 2))]
    matches = _weekly_schedule(teams, outcomes, season_start, rng, "s")
    windows = _team_windows(matches)
    last_kick = {team: max(m.kickoff for m in matches
                           if team in (m.home, m.away)) for team in teams}

    lexicon_path = os.path.join(out_dir, "lexicon.txt")
    schedule_path = os.path.join(out_dir, "schedule.csv")
    _write_lexicon(lexicon_path, lexicon, blocklist)
    write_schedule(schedule_path, matches)

    counts = {"assigned": 0, "no_team": 0, "multi_team": 0, "ambiguous": 0,
              "out_of_window": 0, "malformed": 0}
    per_team = {t: 0 for t in teams}
    reservoir = []  # (id, epoch) of some assigned records, for duplicates

    paths = [os.path.join(out_dir, f"tweets-{i:03d}.ndjson")
             for i in range(n_files)]
    handles = [open(p, "wb") for p in paths]
    try:
        for i in range(n_records):
            rec_id = f"r{i:08d}"
            roll = rng.random()
            if roll < 0.015:  # malformed variants
                counts["malformed"] += 1
                kind = rng.randrange(5)
                if kind == 0:
                    line = b'{"id": "' + rec_id.encode() + b'", "ts": "2013-'
                elif kind == 1:
                    line = json.dumps({"id": rec_id, "ts": "2013-10-01T10:00:00Z"}).encode()
                elif kind == 2:
                    line = json.dumps({"id": rec_id, "ts": "not a date",
                                       "text": "hello"}).encode()
                elif kind == 3:
                    line = b'\xff\xfe{"id": "' + rec_id.encode() + b'"}'
                else:
                    line = json.dumps({"id": None, "ts": "2013-10-01T10:00:00Z",
                                       "text": "hello"}).encode()
            elif roll < 0.020 and reservoir:  # duplicate of an earlier record
                counts["malformed"] += 1
                orig_id, orig_epoch = rng.choice(reservoir)
                ts = _EPOCH + timedelta(seconds=orig_epoch + rng.randrange(60, 3600))
                words = _phrase(rng, rng.randrange(4, 9))
                line = json.dumps({"id": orig_id, "ts": _iso(ts),
                                   "text": " ".join(words)}).encode()
            elif roll < 0.14:  # no team hashtag at all
                counts["no_team"] += 1
                words = _phrase(rng, rng.randrange(3, 10))
                if rng.random() < 0.5:
                    words.append(rng.choice(_EXTRA_HASHTAGS))
                ts = _rand_instant(rng, season_start - timedelta(days=10),
                                   season_start + timedelta(days=7 * n_weeks))
                line = json.dumps({"id": rec_id, "ts": _iso(ts, rng.randrange(2)),
                                   "text": " ".join(words)}).encode()
            elif roll < 0.22:  # two different teams
                counts["multi_team"] += 1
                one, two = rng.sample(teams, 2)
                words = _phrase(rng, rng.randrange(3, 8))
                words.append(f"#{one}")
                words.append(f"#{two}fc")
                ts = _rand_instant(rng, season_start, season_start + timedelta(days=7 * n_weeks))
                line = json.dumps({"id": rec_id, "ts": _iso(ts),
                                   "text": " ".join(words)}).encode()
            elif roll < 0.26:  # blocklisted nickname plus cross-sport keyword
                counts["ambiguous"] += 1
                words = _phrase(rng, rng.randrange(3, 8))
                words.append("#pirates")
                words.insert(rng.randrange(len(words)), "superbowl")
                ts = _rand_instant(rng, season_start, season_start + timedelta(days=7 * n_weeks))
                line = json.dumps({"id": rec_id, "ts": _iso(ts),
                                   "text": " ".join(words)}).encode()
            elif roll < 0.30:  # clean team tweet after the team's last match
                counts["out_of_window"] += 1
                team = rng.choice(teams)
                words = _phrase(rng, rng.randrange(3, 8))
                words.append(f"#{team}")
                ts = last_kick[team] + timedelta(seconds=rng.randrange(3600, 3_000_000))
                line = json.dumps({"id": rec_id, "ts": _iso(ts),
                                   "text": " ".join(words)}).encode()
            else:  # assigned to one match side
                team = rng.choice(teams)
                team_windows = windows[team]
                match, side, safe_start, safe_end = rng.choice(team_windows)
                ts = _rand_instant(rng, safe_start, safe_end)
                counts["assigned"] += 1
                per_team[team] += 1
                words = _phrase(rng, rng.randrange(3, 10))
                tag = f"#{team}" if rng.random() < 0.7 else f"#{team}fc"
                words.insert(rng.randrange(len(words) + 1), tag)
                epoch = int((ts - _EPOCH).total_seconds())
                if len(reservoir) < 5000:
                    reservoir.append((rec_id, epoch))
                line = json.dumps({"id": rec_id, "ts": _iso(ts, rng.randrange(2)),
                                   "text": " ".join(words)}).encode()
            handles[rng.randrange(n_files)].write(line + b"\n")
    finally:
        for handle in handles:
            handle.close()

    truth = {
        "total": n_records,
        **counts,
        "per_team": per_team,
    }
    atomic_write_json(os.path.join(out_dir, "truth.json"), truth)
    return {
        "truth": truth,
        "tweet_paths": paths,
        "lexicon": lexicon_path,
        "schedule": schedule_path,
    }


# ---------------------------------------------------------------------------
# planted-bigram league


PLANTED_TEAMS = ("ashford", "brentwell", "caldora", "dunmore", "eastvale",
                 "farrowby")

# planted bigram word pairs; chosen to survive stemming distinctly and to
# tag as content words
HOME_BIGRAMS = (("fortress", "roar"), ("talisman", "surg"), ("vanguard", "blitz"),
                ("citadel", "march"), ("juggernaut", "charg"))
AWAY_BIGRAMS = (("raid", "convoy"), ("nomad", "strut"), ("voyag", "plunder"),
                ("corsair", "drift"), ("outland", "dash"))

DEFAULT_OWN_PRESENCE = (0.85, 0.92, 0.97, 1.0, 1.0)
DEFAULT_OTHER_PRESENCE = (0.15, 0.08, 0.03, 0.0, 0.0)


def _team_hashtags(team: str) -> set:
    return {f"#{team}", f"#{team[:4]}fc"}


def _side_document_tweets(rng, team, n_tweets, planted, present_flags):
    """Texts for one side's tweets; planted pairs are inserted as atomic
    units so nothing can ever split their adjacency."""
    tags = sorted(_team_hashtags(team))
    tweets = []
    for _ in range(n_tweets):
        units = _phrase(rng, rng.randrange(5, 11))
        units.insert(rng.randrange(len(units) + 1), rng.choice(tags))
        tweets.append([(u,) for u in units])
    for pair, present in zip(planted, present_flags):
        if not present:
            continue
        for _ in range(rng.randrange(1, 4)):
            tweet = rng.choice(tweets)
            tweet.insert(rng.randrange(len(tweet) + 1), tuple(pair))
    return [" ".join(word for unit in tweet for word in unit)
            for tweet in tweets]


def _emit_corpus_tweets(out_dir, rng, matches, windows_by_team, text_maker,
                        n_files: int = 2):
    """Generate per-side tweet records and write shuffled NDJSON shards."""
    records = []
    by_team = {}
    for team, rows in windows_by_team.items():
        for match, side, safe_start, safe_end in rows:
            by_team.setdefault((match.match_id, side), (team, match, safe_start, safe_end))
    counter = 0
    for match in matches:
        for side, team in (("home", match.home), ("away", match.away)):
            entry = by_team.get((match.match_id, side))
            if entry is None:
                raise RuntimeError(f"no tweet window for {match.match_id}/{side}")
            _, _, safe_start, safe_end = entry
            texts = text_maker(match, side, team)
            for text in texts:
                counter += 1
                ts = _rand_instant(rng, safe_start, safe_end)
                records.append({"id": f"f{counter:06d}", "ts": _iso(ts, rng.randrange(2)),
                                "text": text})
    rng.shuffle(records)
    paths = [os.path.join(out_dir, f"tweets-{i:03d}.ndjson") for i in range(n_files)]
    handles = [open(p, "w", encoding="utf-8") for p in paths]
    try:
        for record in records:
            handles[rng.randrange(n_files)].write(json.dumps(record) + "\n")
    finally:
        for handle in handles:
            handle.close()
    return paths, counter


def _league_meta(rng, teams, strengths=None):
    rows = []
    for i, team in enumerate(sorted(teams)):
        strength = 0.0 if strengths is None else strengths[team]
        rows.append((
            team,
            round(120 + 140 * strength + rng.uniform(-10, 10), 1),
            round(rng.uniform(23.5, 28.5), 1),
            int(6 + 5 * strength + rng.randrange(0, 4)),
            max(0, int(2 * strength + rng.randrange(0, 2))),
            rng.randrange(0, 3),
            max(0, int(strength + rng.randrange(0, 2)) - 1),
        ))
    return rows


def generate_planted_corpus(out_dir, seed: int = 0, n_matches: int = 60,
                            own_presence=DEFAULT_OWN_PRESENCE,
                            other_presence=DEFAULT_OTHER_PRESENCE,
                            tweets_per_side=(25, 36),
                            outcome_counts=None) -> dict:
    """League fixture with known discriminative bigrams per side.

    Home-side documents of home wins carry the home planted bigrams with
    probability ``own_presence[rank]`` and other outcomes with
    ``other_presence[rank]``; away-side documents mirror this for away
    wins.

    Outcome counts are near-balanced with a two-match majority margin by
    default. An exactly balanced split makes leave-one-out degenerate for
    prior-driven learners: removing the held-out match always demotes its
    class to training minority, which reads as anti-signal under label
    shuffles. A stable majority class keeps that artifact out of the null.
    """
    rng = random.Random(seed)
    os.makedirs(out_dir, exist_ok=True)
    teams = list(PLANTED_TEAMS)
    if outcome_counts is None:
        third = n_matches // 3
        outcome_counts = (n_matches - 2 * third + 2, third - 1, third - 1)
    if sum(outcome_counts) != n_matches:
        raise ValueError("outcome counts must sum to the match count")
    outcomes = [cls for cls, count in enumerate(outcome_counts)
                for _ in range(count)]
    rng.shuffle(outcomes)

    window_start = datetime(2013, 10, 5, 12, 0, tzinfo=timezone.utc)
    matches = _weekly_schedule(teams, outcomes, window_start, rng, "m")
    prior_outcomes = [rng.randrange(3) for _ in range(9)]
    prior_start = window_start - timedelta(days=7 * ((len(prior_outcomes) + 2) // 3 + 1))
    prior = _weekly_schedule(teams, prior_outcomes, prior_start, rng, "p")

    outcome_by_id = {m.match_id: int(m.outcome) for m in matches}

    def text_maker(match, side, team):
        outcome = outcome_by_id[match.match_id]
        planted = HOME_BIGRAMS if side == "home" else AWAY_BIGRAMS
        own_outcome = 0 if side == "home" else 2
        flags = []
        for rank in range(len(planted)):
            p = own_presence[rank] if outcome == own_outcome else other_presence[rank]
            flags.append(rng.random() < p)
        n_tweets = rng.randrange(tweets_per_side[0], tweets_per_side[1])
        return _side_document_tweets(rng, team, n_tweets, planted, flags)

    windows = _team_windows(matches)
    tweet_paths, n_tweets = _emit_corpus_tweets(out_dir, rng, matches, windows,
                                                text_maker)

    lexicon_path = os.path.join(out_dir, "lexicon.txt")
    _write_lexicon(lexicon_path, {t: _team_hashtags(t) for t in teams})
    schedule_path = os.path.join(out_dir, "schedule.csv")
    write_schedule(schedule_path, matches)
    prior_path = os.path.join(out_dir, "prior_results.csv")
    write_schedule(prior_path, prior)
    meta_path = os.path.join(out_dir, "team_meta.csv")
    _write_meta(meta_path, _league_meta(rng, teams))

    truth = {
        "seed": seed,
        "n_matches": n_matches,
        "n_tweets": n_tweets,
        "outcomes": {m.match_id: int(m.outcome) for m in matches},
        "outcome_counts": list(outcome_counts),
        "home_bigrams": [list(b) for b in HOME_BIGRAMS],
        "away_bigrams": [list(b) for b in AWAY_BIGRAMS],
        "own_presence": list(own_presence),
        "other_presence": list(other_presence),
    }
    atomic_write_json(os.path.join(out_dir, "truth.json"), truth)
    return {"truth": truth, "tweet_paths": tweet_paths, "lexicon": lexicon_path,
            "schedule": schedule_path, "prior_results": prior_path,
            "team_meta": meta_path}


# ---------------------------------------------------------------------------
# complementary twitter + historical signals


COMPLEMENTARY_TEAMS = ("grimsview", "harwick", "ilford", "jarrow",
                       "kestrel", "lynmouth")

# Four teams share the middle strength; matches between two of them are
# the only even pairings, so drawishness is readable from per-team
# statistics and draws stay frequent under random weekly pairings.
_COMP_STRENGTHS = (0.9, 0.5, 0.5, 0.5, 0.5, 0.1)

_EVEN_GAP = 0.1


def _comp_outcome(rng, strength_home, strength_away):
    """Draw (outcome, mood) for one match.

    The mood coin picks which side would win and is surfaced only through
    tweets. Whether the match actually ends decisive depends only on the
    strength gap: near-equal sides always draw. Each information source
    alone is therefore partial, and together they determine the outcome.
    """
    mood = 0 if rng.random() < 0.5 else 2
    if abs(strength_home - strength_away) < _EVEN_GAP:
        return 1, mood
    return mood, mood


def _comp_stats(rng, strength, goals):
    return SideStats(
        goals=goals,
        corners=max(0, int(rng.gauss(2 + 8 * strength, 0.9))),
        shots_on_target=max(goals, int(rng.gauss(1 + 7 * strength, 0.8))),
        fouls=max(0, int(rng.gauss(13 - 5 * strength, 1.2))),
        yellows=max(0, int(rng.gauss(2.2 - 1.2 * strength, 0.6))),
        reds=1 if rng.random() < 0.05 else 0,
    )


def _comp_goals(rng, outcome, strength_home, strength_away):
    base_h = max(0, int(rng.gauss(1.0 + 0.9 * strength_home, 0.8)))
    base_a = max(0, int(rng.gauss(0.8 + 0.9 * strength_away, 0.8)))
    if outcome == 0:
        goals_h = max(base_h, base_a + 1)
        goals_a = base_a
    elif outcome == 2:
        goals_a = max(base_a, base_h + 1)
        goals_h = base_h
    else:
        goals_h = goals_a = min(base_h, base_a)
    return goals_h, goals_a


def generate_complementary_corpus(out_dir, seed: int = 0, n_matches: int = 60,
                                  own_presence: float = 0.9,
                                  other_presence: float = 0.1) -> dict:
    """Fixture where tweet bigrams and club statistics carry independent,
    individually partial outcome signal.

    Tweets surface a per-match mood coin saying which side would win a
    decisive game; strengths (via counting-stat averages and club meta)
    say whether the game is decisive at all, because only the two
    equal-strength clubs ever draw. A model on either view alone predicts
    part of the outcome; a model on both recovers it almost fully.
    """
    rng = random.Random(seed)
    os.makedirs(out_dir, exist_ok=True)
    teams = list(COMPLEMENTARY_TEAMS)
    strengths = dict(zip(teams, _COMP_STRENGTHS))

    window_start = datetime(2014, 1, 11, 12, 0, tzinfo=timezone.utc)
    prior_start = window_start - timedelta(days=7 * 13)
    n_prior = 36
    matches = []
    prior = []
    moods = {}

    def build(prefix, start, count, store):
        built = 0
        week = 0
        while built < count:
            order = teams[:]
            rng.shuffle(order)
            pairs = [(order[j], order[j + 1]) for j in range(0, len(order) - 1, 2)]
            for slot, (home, away) in enumerate(pairs):
                if built >= count:
                    break
                kickoff = start + timedelta(days=7 * week, hours=(12, 15, 17)[slot % 3])
                outcome, mood = _comp_outcome(rng, strengths[home],
                                              strengths[away])
                goals_h, goals_a = _comp_goals(rng, outcome, strengths[home],
                                               strengths[away])
                match_id = f"{prefix}{built + 1:03d}"
                moods[match_id] = mood
                store.append(MatchRecord(
                    match_id=match_id,
                    kickoff=kickoff,
                    home=home,
                    away=away,
                    home_stats=_comp_stats(rng, strengths[home], goals_h),
                    away_stats=_comp_stats(rng, strengths[away], goals_a),
                ))
                built += 1
            week += 1

    build("q", prior_start, n_prior, prior)
    build("c", window_start, n_matches, matches)

    def text_maker(match, side, team):
        mood = moods[match.match_id]
        planted = HOME_BIGRAMS if side == "home" else AWAY_BIGRAMS
        own_outcome = 0 if side == "home" else 2
        p = own_presence if mood == own_outcome else other_presence
        flags = [rng.random() < p for _ in planted]
        n_tweets = rng.randrange(25, 36)
        return _side_document_tweets(rng, team, n_tweets, planted, flags)

    windows = _team_windows(matches)
    tweet_paths, n_tweets = _emit_corpus_tweets(out_dir, rng, matches, windows,
                                                text_maker)

    lexicon_path = os.path.join(out_dir, "lexicon.txt")
    _write_lexicon(lexicon_path, {t: _team_hashtags(t) for t in teams})
    schedule_path = os.path.join(out_dir, "schedule.csv")
    write_schedule(schedule_path, matches)
    prior_path = os.path.join(out_dir, "prior_results.csv")
    write_schedule(prior_path, prior)
    meta_path = os.path.join(out_dir, "team_meta.csv")
    _write_meta(meta_path, _league_meta(rng, teams, strengths))

    truth = {
        "seed": seed,
        "n_matches": n_matches,
        "n_tweets": n_tweets,
        "strengths": strengths,
        "outcomes": {m.match_id: int(m.outcome) for m in matches},
        "moods": {m.match_id: moods[m.match_id] for m in matches},
        "own_presence": own_presence,
        "other_presence": other_presence,
    }
    atomic_write_json(os.path.join(out_dir, "truth.json"), truth)
    return {"truth": truth, "tweet_paths": tweet_paths, "lexicon": lexicon_path,
            "schedule": schedule_path, "prior_results": prior_path,
            "team_meta": meta_path}
