"""Multinomial logistic regression trained by full-batch gradient descent.

Features are standardized internally (constant features become all-zero
columns). The first class's weight row is pinned at zero so the remaining
rows are identifiable; bias terms are never penalized, so with a huge l2
the model falls back to predicting class priors.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_L2 = 1e-3
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 5000

_ARMIJO_C = 1e-4
_MIN_STEP = 1e-12


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def unpack_weights(flat: np.ndarray, n_classes: int, n_columns: int) -> np.ndarray:
    """Free parameter vector -> full (n_classes, n_columns) weight matrix
    with the reference class row fixed at zero. Last column is the bias."""
    full = np.zeros((n_classes, n_columns))
    full[1:] = flat.reshape(n_classes - 1, n_columns)
    return full


def loss_and_grad(flat: np.ndarray, design: np.ndarray, labels: np.ndarray,
                  l2: float, n_classes: int):
    """Mean regularized negative log-likelihood and its gradient.

    ``design`` must already carry the bias column of ones as its last
    column; the l2 penalty covers every free weight except the bias.
    Exposed at module level so the gradient can be checked against finite
    differences of the loss alone.
    """
    n, n_columns = design.shape
    full = unpack_weights(flat, n_classes, n_columns)
    scores = design @ full.T
    log_probs = _log_softmax(scores)
    nll = -float(log_probs[np.arange(n), labels].mean())
    free = full[1:]
    penalty = 0.5 * l2 * float((free[:, :-1] ** 2).sum())
    loss = nll + penalty

    probs = np.exp(log_probs)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), labels] = 1.0
    grad_full = (probs - onehot).T @ design / n
    grad_free = grad_full[1:].copy()
    grad_free[:, :-1] += l2 * free[:, :-1]
    return loss, grad_free.ravel()


@dataclass(frozen=True)
class LogisticModel:
    """Trained weights plus the standardization fitted on training data."""

    classes: tuple
    weights: np.ndarray   # (n_classes, p + 1), last column bias, row 0 zero
    center: np.ndarray    # (p,)
    scale: np.ndarray     # (p,), constant features have scale 1 after centering
    converged: bool
    iterations: int
    final_loss: float

    @property
    def n_features(self) -> int:
        return self.weights.shape[1] - 1

    def _design(self, matrix) -> np.ndarray:
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        if matrix.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features,"
                             f" got {matrix.shape[1]}")
        standardized = (matrix - self.center) / self.scale
        return np.hstack([standardized, np.ones((matrix.shape[0], 1))])

    def decision_scores(self, matrix) -> np.ndarray:
        return self._design(matrix) @ self.weights.T

    def predict_proba(self, matrix) -> np.ndarray:
        return _softmax(self.decision_scores(matrix))

    def predict(self, matrix) -> np.ndarray:
        return np.argmax(self.decision_scores(matrix), axis=1)


def train_logistic(matrix, labels, n_classes: int = 3, l2: float = DEFAULT_L2,
                   max_iter: int = DEFAULT_MAX_ITER,
                   tol: float = DEFAULT_TOL) -> LogisticModel:
    """Fit by gradient descent with Armijo backtracking line search.

    Training stops when the gradient max-norm drops below ``tol`` or after
    ``max_iter`` accepted steps. Loss never increases across accepted
    steps; a non-finite loss is reported as an error.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.int64)
    if matrix.shape[0] != labels.shape[0]:
        raise ValueError("matrix and labels length mismatch")
    if np.unique(labels).size < 2:
        raise ValueError("training data contains a single class")
    if labels.min() < 0 or labels.max() >= n_classes:
        raise ValueError(f"labels outside 0..{n_classes - 1}")
    if l2 < 0:
        raise ValueError("l2 must be nonnegative")

    center = matrix.mean(axis=0)
    spread = matrix.std(axis=0)
    scale = np.where(spread > 0, spread, 1.0)
    design = np.hstack([(matrix - center) / scale,
                        np.ones((matrix.shape[0], 1))])

    n_columns = design.shape[1]
    flat = np.zeros((n_classes - 1) * n_columns)
    loss, grad = loss_and_grad(flat, design, labels, l2, n_classes)
    if not np.isfinite(loss):
        raise ValueError("non-finite loss at initialization")

    converged = False
    iterations = 0
    step = 1.0
    for iterations in range(1, max_iter + 1):
        grad_norm = float(np.abs(grad).max())
        if grad_norm < tol:
            converged = True
            iterations -= 1
            break
        grad_sq = float(grad @ grad)
        step = min(step * 2.0, 1e6)  # allow the step to regrow after backtracks
        while True:
            candidate = flat - step * grad
            new_loss, new_grad = loss_and_grad(candidate, design, labels, l2,
                                               n_classes)
            if np.isfinite(new_loss) and new_loss <= loss - _ARMIJO_C * step * grad_sq:
                break
            step *= 0.5
            if step < _MIN_STEP:
                raise ValueError("line search failed (non-finite or "
                                 "non-decreasing loss); check feature scaling")
        flat, loss, grad = candidate, new_loss, new_grad
    else:
        converged = float(np.abs(grad).max()) < tol

    weights = unpack_weights(flat, n_classes, n_columns)
    return LogisticModel(classes=tuple(range(n_classes)), weights=weights,
                         center=center, scale=scale, converged=converged,
                         iterations=iterations, final_loss=loss)
