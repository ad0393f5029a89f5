import glob
import json
import os
from types import SimpleNamespace

import pytest

from pitchside import historical, ingest, pipeline
from pitchside.matches import load_schedule

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

MINI = os.path.join(FIXTURES, "mini")
PLANTED = os.path.join(FIXTURES, "planted")
COMPLEMENTARY = os.path.join(FIXTURES, "complementary")


def load_corpus(root, orders=(2,)):
    """Ingest a committed corpus directory into an instance set."""
    lexicon = ingest.load_lexicon(os.path.join(root, "lexicon.txt"))
    schedule = load_schedule(os.path.join(root, "schedule.csv"))
    tweet_paths = sorted(glob.glob(os.path.join(root, "tweets-*.ndjson")))
    documents, stats = ingest.ingest_corpus(tweet_paths, lexicon, schedule)
    prepared = pipeline.prepare_documents(documents, lexicon=lexicon)
    meta = historical.load_team_meta(os.path.join(root, "team_meta.csv"))
    seed_matches = load_schedule(os.path.join(root, "prior_results.csv"))
    instance_set = pipeline.build_instances(
        prepared, schedule, meta=meta, seed_matches=seed_matches, orders=orders)
    with open(os.path.join(root, "truth.json")) as handle:
        truth = json.load(handle)
    return SimpleNamespace(
        root=root, lexicon=lexicon, schedule=schedule,
        tweet_paths=tweet_paths, documents=documents, stats=stats,
        prepared=prepared, meta=meta, seed_matches=seed_matches,
        instance_set=instance_set, truth=truth,
    )


@pytest.fixture(scope="session")
def planted_corpus():
    return load_corpus(PLANTED)


@pytest.fixture(scope="session")
def complementary_corpus():
    return load_corpus(COMPLEMENTARY)
