"""N-gram feature scoring, ranking and vectorization.

Candidate n-grams from a side's documents are scored against the match
outcome via a 2x3 presence/outcome contingency table, using either the
chi-square statistic or mutual information. Ranking is a total order so
equal scores never make the selection depend on dict iteration order.
Selected n-grams become relative-frequency features.
"""

import csv
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .matches import CLASSES
from .textprep import extract_ngrams

SCORERS = ("chi2", "mi")
DEFAULT_MIN_DF = 2
DEFAULT_ORDERS = (1, 2)

RANKING_COLUMNS = ["rank", "side", "scorer", "ngram", "statistic", "pvalue_or_mi"]


def chi2_pvalue(stat: float) -> float:
    """Upper-tail probability for a chi-square variable with 2 degrees of
    freedom, which has the closed form exp(-x/2)."""
    if stat < 0:
        raise ValueError("chi-square statistic must be nonnegative")
    return math.exp(-stat / 2.0)


def chi2_score(table) -> tuple:
    """Chi-square statistic and p-value for a 2x3 contingency table.

    Degenerate tables (an all-zero row or column, including empty tables)
    carry no association evidence and score (0.0, 1.0).
    """
    rows = [[float(v) for v in row] for row in table]
    row_totals = [sum(row) for row in rows]
    col_totals = [sum(col) for col in zip(*rows)]
    grand = sum(row_totals)
    if grand <= 0 or min(row_totals) <= 0 or min(col_totals) <= 0:
        return 0.0, 1.0
    stat = 0.0
    for i, row in enumerate(rows):
        for j, observed in enumerate(row):
            expected = row_totals[i] * col_totals[j] / grand
            if expected > 0:
                stat += (observed - expected) ** 2 / expected
    return stat, chi2_pvalue(stat)


def mutual_information(table) -> float:
    """Mutual information of a contingency table, in bits.

    Cells with a zero count contribute nothing; an all-zero row or column
    (or an empty table) yields 0.0.
    """
    rows = [[float(v) for v in row] for row in table]
    grand = sum(sum(row) for row in rows)
    if grand <= 0:
        return 0.0
    row_totals = [sum(row) for row in rows]
    col_totals = [sum(col) for col in zip(*rows)]
    mi = 0.0
    for i, row in enumerate(rows):
        for j, observed in enumerate(row):
            if observed <= 0:
                continue
            p_joint = observed / grand
            p_prod = (row_totals[i] / grand) * (col_totals[j] / grand)
            mi += p_joint * math.log2(p_joint / p_prod)
    return max(mi, 0.0)


@dataclass(frozen=True)
class RankedFeature:
    """One scored n-gram: ``pvalue_or_mi`` is the p-value under chi2 and
    the MI value (again) under mi, matching the export column."""

    ngram: tuple
    statistic: float
    pvalue_or_mi: float

    @property
    def order(self) -> int:
        return len(self.ngram)

    @property
    def text(self) -> str:
        return " ".join(self.ngram)


def doc_ngram_counts(doc, orders=DEFAULT_ORDERS) -> Counter:
    """Merged n-gram counts for one document over the requested orders."""
    counts = Counter()
    for order in orders:
        counts.update(extract_ngrams(doc, order))
    return counts


def contingency_table(present_flags, labels, n_classes: int = len(CLASSES)):
    """2 x n_classes table of document counts: rows absent/present."""
    table = [[0] * n_classes for _ in range(2)]
    for present, label in zip(present_flags, labels):
        if not 0 <= label < n_classes:
            raise ValueError(f"label {label} outside 0..{n_classes - 1}")
        table[1 if present else 0][label] += 1
    return table


def rank_from_counts(counts_list, labels, scorer: str = "chi2",
                     min_df: int = DEFAULT_MIN_DF):
    """Rank candidate n-grams from per-document count dictionaries.

    Candidates must appear in at least ``min_df`` documents. The order is
    total: chi2 sorts by (p-value asc, statistic desc, n-gram asc) and mi
    by (MI desc, n-gram asc).
    """
    if scorer not in SCORERS:
        raise ValueError(f"unknown scorer {scorer!r}, expected one of {SCORERS}")
    if len(counts_list) != len(labels):
        raise ValueError("counts and labels length mismatch")
    if len(set(labels)) < 2:
        raise ValueError("ranking needs at least 2 outcome classes")
    doc_freq = Counter()
    for counts in counts_list:
        doc_freq.update(counts.keys())
    candidates = [g for g, df in doc_freq.items() if df >= min_df]
    ranked = []
    for ngram in candidates:
        flags = [ngram in counts for counts in counts_list]
        table = contingency_table(flags, labels)
        if scorer == "chi2":
            stat, pvalue = chi2_score(table)
            ranked.append(RankedFeature(ngram, stat, pvalue))
        else:
            mi = mutual_information(table)
            ranked.append(RankedFeature(ngram, mi, mi))
    if scorer == "chi2":
        ranked.sort(key=lambda f: (f.pvalue_or_mi, -f.statistic, f.ngram))
    else:
        ranked.sort(key=lambda f: (-f.statistic, f.ngram))
    return ranked


def rank_features(docs, labels, scorer: str = "chi2", orders=DEFAULT_ORDERS,
                  min_df: int = DEFAULT_MIN_DF):
    """Rank candidate n-grams of the given orders from prepared documents."""
    counts_list = [doc_ngram_counts(doc, orders) for doc in docs]
    return rank_from_counts(counts_list, labels, scorer=scorer, min_df=min_df)


def select_top(ranked, k: int):
    """Top-k prefix of a ranking (fewer if the ranking is shorter)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(ranked[:k])


WEIGHTINGS = ("relfreq", "binary", "count")


def vectorize_counts(counts_list, ngrams, weighting: str = "relfreq") -> np.ndarray:
    """Feature matrix from per-document n-gram counts.

    Default weighting is relative frequency: the n-gram's count divided
    by the document's total number of n-grams of that same order, 0 for a
    document with none of that order. "binary" is presence 0/1 and
    "count" the raw count.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}, expected one of {WEIGHTINGS}")
    n_docs = len(counts_list)
    matrix = np.zeros((n_docs, len(ngrams)), dtype=np.float64)
    orders = sorted({len(g) for g in ngrams})
    for i, counts in enumerate(counts_list):
        if weighting == "relfreq":
            totals = {order: 0 for order in orders}
            for gram, count in counts.items():
                order = len(gram)
                if order in totals:
                    totals[order] += count
        for j, gram in enumerate(ngrams):
            count = counts.get(gram, 0)
            if weighting == "binary":
                matrix[i, j] = 1.0 if count > 0 else 0.0
            elif weighting == "count":
                matrix[i, j] = count
            else:
                total = totals[len(gram)]
                if total > 0:
                    matrix[i, j] = count / total
    return matrix


def vectorize(docs, ngrams, orders=DEFAULT_ORDERS,
              weighting: str = "relfreq") -> np.ndarray:
    """Feature matrix straight from prepared documents."""
    counts_list = [doc_ngram_counts(doc, orders) for doc in docs]
    return vectorize_counts(counts_list, ngrams, weighting=weighting)


def write_ranking_csv(path, rankings: dict, scorer: str):
    """Write per-side rankings as CSV with a stable row order.

    ``rankings`` maps side name ("home"/"away") to a ranked feature list;
    rows are grouped by side name ascending, rank starting at 1 per side.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(RANKING_COLUMNS)
        for side in sorted(rankings):
            for rank, feature in enumerate(rankings[side], 1):
                writer.writerow([rank, side, scorer, feature.text,
                                 repr(feature.statistic),
                                 repr(feature.pvalue_or_mi)])
