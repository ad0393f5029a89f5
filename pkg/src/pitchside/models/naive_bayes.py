"""Naive Bayes for continuous or binary feature vectors.

Continuous features get per-class Gaussian likelihoods with variance
smoothing; when every training value is 0 or 1 the model switches to
Bernoulli likelihoods with Laplace smoothing. All posterior math runs in
log space.
"""

from dataclasses import dataclass

import numpy as np

VARIANCE_SMOOTHING = 1e-9
VARIANCE_FLOOR = 1e-12
LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class NaiveBayesModel:
    """Trained model; ``variant`` is "gaussian" or "bernoulli"."""

    variant: str
    classes: tuple
    log_priors: np.ndarray      # (n_classes,)
    means: np.ndarray           # gaussian: (n_classes, p) means; bernoulli: P(x=1)
    variances: np.ndarray | None  # gaussian only: (n_classes, p)

    @property
    def n_features(self) -> int:
        return self.means.shape[1]

    def _check(self, matrix) -> np.ndarray:
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        if matrix.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features,"
                             f" got {matrix.shape[1]}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("non-finite feature values")
        return matrix

    def log_joint(self, matrix) -> np.ndarray:
        """Unnormalized log P(class, x) for each row, shape (n, n_classes)."""
        matrix = self._check(matrix)
        if self.variant == "gaussian":
            # log N(x; mu, var) summed over features, vectorized per class
            out = np.empty((matrix.shape[0], len(self.classes)))
            for c in range(len(self.classes)):
                diff = matrix - self.means[c]
                log_density = -0.5 * (LOG_2PI + np.log(self.variances[c])
                                      + diff * diff / self.variances[c])
                out[:, c] = self.log_priors[c] + log_density.sum(axis=1)
            return out
        out = np.empty((matrix.shape[0], len(self.classes)))
        log_p = np.log(self.means)
        log_q = np.log1p(-self.means)
        for c in range(len(self.classes)):
            out[:, c] = (self.log_priors[c]
                         + matrix @ log_p[c] + (1.0 - matrix) @ log_q[c])
        return out

    def predict_log_proba(self, matrix) -> np.ndarray:
        joint = self.log_joint(matrix)
        # logsumexp normalization keeps posteriors stable for extreme joints
        peak = joint.max(axis=1, keepdims=True)
        norm = peak + np.log(np.exp(joint - peak).sum(axis=1, keepdims=True))
        return joint - norm

    def predict_proba(self, matrix) -> np.ndarray:
        return np.exp(self.predict_log_proba(matrix))

    def predict(self, matrix) -> np.ndarray:
        joint = self.log_joint(matrix)
        return np.argmax(joint, axis=1)  # argmax takes the lowest index on ties


def _is_binary(matrix: np.ndarray) -> bool:
    return bool(np.all((matrix == 0.0) | (matrix == 1.0)))


def train_nb(matrix, labels, n_classes: int = 3,
             variant: str | None = None) -> NaiveBayesModel:
    """Fit naive Bayes with empirical class priors.

    ``variant`` forces "gaussian" or "bernoulli"; by default all-binary
    training data selects Bernoulli and anything else Gaussian. Training
    data must contain at least two classes.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.int64)
    if matrix.shape[0] != labels.shape[0]:
        raise ValueError("matrix and labels length mismatch")
    if matrix.shape[0] == 0:
        raise ValueError("empty training set")
    present = np.unique(labels)
    if present.size < 2:
        raise ValueError("training data contains a single class")
    if present.min() < 0 or present.max() >= n_classes:
        raise ValueError(f"labels outside 0..{n_classes - 1}")
    if variant is None:
        variant = "bernoulli" if _is_binary(matrix) else "gaussian"
    if variant not in ("gaussian", "bernoulli"):
        raise ValueError(f"unknown naive Bayes variant {variant!r}")

    n, p = matrix.shape
    counts = np.bincount(labels, minlength=n_classes).astype(np.float64)
    with np.errstate(divide="ignore"):
        log_priors = np.where(counts > 0, np.log(np.maximum(counts, 1) / n), -np.inf)

    if variant == "bernoulli":
        means = np.empty((n_classes, p))
        for c in range(n_classes):
            rows = matrix[labels == c]
            # Laplace smoothing keeps log-likelihoods finite for unseen values
            ones = rows.sum(axis=0) if rows.size else np.zeros(p)
            means[c] = (ones + 1.0) / (rows.shape[0] + 2.0)
        return NaiveBayesModel(variant="bernoulli", classes=tuple(range(n_classes)),
                               log_priors=log_priors, means=means, variances=None)

    smoothing = max(VARIANCE_SMOOTHING * float(matrix.var(axis=0).max()),
                    VARIANCE_FLOOR)
    means = np.zeros((n_classes, p))
    variances = np.full((n_classes, p), smoothing)
    for c in range(n_classes):
        rows = matrix[labels == c]
        if rows.shape[0] == 0:
            continue
        means[c] = rows.mean(axis=0)
        variances[c] = rows.var(axis=0) + smoothing
    return NaiveBayesModel(variant="gaussian", classes=tuple(range(n_classes)),
                           log_priors=log_priors, means=means, variances=variances)
