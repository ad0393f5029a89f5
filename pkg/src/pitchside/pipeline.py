"""Dataset assembly: one instance per match, three feature views.

An instance pairs a match's outcome label with (a) n-gram counts from its
home-side and away-side tweet documents, (b) the 24-value historical
vector when club data is available. Evaluation draws the twitter-only,
historical-only or combined matrix from the same instance list, so the
three views always cover the same matches.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import features, historical, textprep
from .ingest import IngestStats, MatchSideDocument
from .matches import Side

ARTIFACT_VERSION = 1


class PipelineError(ValueError):
    pass


@dataclass
class MatchInstance:
    """One match, ready for any of the three dataset views.

    ``label`` is deliberately mutable so experiments (label shuffles)
    can relabel instances without touching match records.
    """

    match_id: str
    label: int
    home_counts: Counter
    away_counts: Counter
    historical: np.ndarray | None = None


@dataclass
class InstanceSet:
    """Aligned instances plus provenance counters for reports."""

    instances: list
    excluded_match_ids: list = field(default_factory=list)
    orders: tuple = features.DEFAULT_ORDERS

    def __len__(self):
        return len(self.instances)

    def labels(self) -> np.ndarray:
        return np.asarray([inst.label for inst in self.instances], dtype=np.int64)

    def has_historical(self) -> bool:
        return all(inst.historical is not None for inst in self.instances)


@dataclass(frozen=True)
class FeatureSet:
    """Frozen top-k rankings per side; the twitter vector layout is
    [home n-grams then away n-grams]."""

    home: tuple
    away: tuple

    @property
    def home_ngrams(self) -> tuple:
        return tuple(f.ngram for f in self.home)

    @property
    def away_ngrams(self) -> tuple:
        return tuple(f.ngram for f in self.away)

    @property
    def width(self) -> int:
        return len(self.home) + len(self.away)


@dataclass(frozen=True)
class LabeledVector:
    """A feature vector carrying its outcome label."""

    values: np.ndarray
    label: int


def merge_combined(twitter: LabeledVector, historical_vec: LabeledVector) -> LabeledVector:
    """Concatenate twitter and historical vectors for the same match."""
    if twitter.label != historical_vec.label:
        raise PipelineError(f"label mismatch: {twitter.label} vs {historical_vec.label}")
    return LabeledVector(values=np.concatenate([twitter.values, historical_vec.values]),
                         label=twitter.label)


def prepare_documents(documents, lexicon=None, pos_filtering: bool = True,
                      keep_tags=None, drop_own_hashtags: bool = True):
    """Token-prepare any documents that do not yet carry token streams."""
    kwargs = {"lexicon": lexicon, "pos_filtering": pos_filtering,
              "drop_own_hashtags": drop_own_hashtags}
    if keep_tags is not None:
        kwargs["keep_tags"] = keep_tags
    return [doc if doc.tokens is not None else textprep.prepare_document(doc, **kwargs)
            for doc in documents]


def build_instances(documents, matches, meta=None, seed_matches=(),
                    orders=features.DEFAULT_ORDERS) -> InstanceSet:
    """Aggregate prepared documents and match records into instances.

    A match missing a side's document contributes an empty counter for
    that side. With club metadata, matches where either team has no
    prior results are excluded (and listed), so all three dataset views
    stay aligned; without metadata the historical view is absent.
    """
    by_key = {}
    for doc in documents:
        if doc.tokens is None:
            raise PipelineError(f"document {doc.match_id}/{doc.side.value}"
                                " has no token streams; run preparation first")
        key = (doc.match_id, doc.side)
        if key in by_key:
            raise PipelineError(f"duplicate document for {key}")
        by_key[key] = doc

    vectors, excluded = {}, []
    if meta is not None:
        vectors, excluded = historical.build_historical_dataset(
            matches, meta, seed_matches=seed_matches)
    excluded_set = set(excluded)

    instances = []
    for match in sorted(matches, key=lambda m: (m.kickoff, m.match_id)):
        if match.match_id in excluded_set:
            continue
        home_doc = by_key.get((match.match_id, Side.HOME))
        away_doc = by_key.get((match.match_id, Side.AWAY))
        home_counts = (features.doc_ngram_counts(home_doc, orders)
                       if home_doc is not None else Counter())
        away_counts = (features.doc_ngram_counts(away_doc, orders)
                       if away_doc is not None else Counter())
        instances.append(MatchInstance(
            match_id=match.match_id,
            label=int(match.outcome),
            home_counts=home_counts,
            away_counts=away_counts,
            historical=vectors.get(match.match_id),
        ))
    return InstanceSet(instances=instances, excluded_match_ids=sorted(excluded),
                       orders=tuple(orders))


def select_feature_set(instances, scorer: str = "chi2",
                       k: int = 10, min_df: int = features.DEFAULT_MIN_DF) -> FeatureSet:
    """Rank each side's n-grams against the labels and keep the top k."""
    labels = [inst.label for inst in instances]
    home_ranked = features.rank_from_counts([inst.home_counts for inst in instances],
                                            labels, scorer=scorer, min_df=min_df)
    away_ranked = features.rank_from_counts([inst.away_counts for inst in instances],
                                            labels, scorer=scorer, min_df=min_df)
    return FeatureSet(home=tuple(home_ranked[:k]), away=tuple(away_ranked[:k]))


def twitter_matrix(instances, feature_set: FeatureSet,
                   weighting: str = "relfreq") -> np.ndarray:
    """[home-side weights, away-side weights] per instance."""
    home = features.vectorize_counts([inst.home_counts for inst in instances],
                                     feature_set.home_ngrams, weighting=weighting)
    away = features.vectorize_counts([inst.away_counts for inst in instances],
                                     feature_set.away_ngrams, weighting=weighting)
    return np.hstack([home, away])


def historical_matrix(instances) -> np.ndarray:
    rows = []
    for inst in instances:
        if inst.historical is None:
            raise PipelineError(f"match {inst.match_id!r} has no historical vector")
        rows.append(inst.historical)
    return np.vstack(rows) if rows else np.zeros((0, historical.VECTOR_WIDTH))


def combined_matrix(instances, feature_set: FeatureSet,
                    weighting: str = "relfreq") -> np.ndarray:
    return np.hstack([twitter_matrix(instances, feature_set, weighting=weighting),
                      historical_matrix(instances)])


def dataset_matrix(instances, dataset: str, feature_set: FeatureSet | None = None,
                   weighting: str = "relfreq") -> np.ndarray:
    """The matrix for one dataset view; twitter/combined need a feature set."""
    if dataset == "historical":
        return historical_matrix(instances)
    if feature_set is None:
        raise PipelineError(f"dataset {dataset!r} requires a feature set")
    if dataset == "twitter":
        return twitter_matrix(instances, feature_set, weighting=weighting)
    if dataset == "combined":
        return combined_matrix(instances, feature_set, weighting=weighting)
    raise PipelineError(f"unknown dataset {dataset!r}")


def documents_to_payload(documents, stats: IngestStats) -> dict:
    """JSON-ready artifact for persisted ingestion output."""
    return {
        "format_version": ARTIFACT_VERSION,
        "stats": stats.as_dict(),
        "documents": [{
            "match_id": doc.match_id,
            "side": doc.side.value,
            "team": doc.team,
            "tweets": [[tid, text, None if tags is None else [list(p) for p in tags]]
                       for tid, text, tags in doc.tweets],
            "tokens": None if doc.tokens is None else [list(t) for t in doc.tokens],
        } for doc in documents],
    }


def documents_from_payload(payload: dict):
    version = payload.get("format_version")
    if version != ARTIFACT_VERSION:
        raise PipelineError(f"unsupported artifact version {version!r}")
    stats_dict = dict(payload["stats"])
    stats_dict["malformed_samples"] = tuple(
        tuple(s) for s in stats_dict.get("malformed_samples", ()))
    stats = IngestStats(**stats_dict)
    documents = []
    for entry in payload["documents"]:
        tweets = tuple(
            (tid, text, None if tags is None else tuple(tuple(p) for p in tags))
            for tid, text, tags in entry["tweets"])
        tokens = entry.get("tokens")
        documents.append(MatchSideDocument(
            match_id=entry["match_id"],
            side=Side(entry["side"]),
            team=entry["team"],
            tweets=tweets,
            tokens=None if tokens is None else tuple(tuple(t) for t in tokens),
        ))
    return documents, stats
