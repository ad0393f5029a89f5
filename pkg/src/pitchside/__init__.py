"""Football match outcome prediction from fan tweets and historical statistics.

The pipeline: ingest timestamped tweet files and assign each tweet to one
team's upcoming match, turn the tweets into POS-filtered stemmed n-gram
documents, rank n-grams against match outcomes (chi-square or mutual
information), build per-match feature vectors (tweet-derived, historical,
or both), and evaluate native classifiers with leave-one-out
cross-validation, reporting accuracy and Cohen's kappa.
"""

__version__ = "0.1.0"
