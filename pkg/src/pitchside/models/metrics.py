"""Confusion matrices, accuracy and Cohen's kappa.

All functions accept any square count matrix; the pipeline uses 3x3
(home win / draw / away win) and tests also exercise 2x2.
"""

import numpy as np


def confusion_matrix(true_labels, predicted_labels, n_classes: int) -> np.ndarray:
    """Count matrix with rows = true class, columns = predicted class."""
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    for truth, pred in zip(true_labels, predicted_labels):
        if not (0 <= truth < n_classes and 0 <= pred < n_classes):
            raise ValueError(f"label pair ({truth}, {pred}) outside 0..{n_classes - 1}")
        cm[truth, pred] += 1
    return cm


def _checked(cm) -> np.ndarray:
    cm = np.asarray(cm, dtype=np.float64)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise ValueError(f"confusion matrix must be square, got shape {cm.shape}")
    if cm.sum() <= 0:
        raise ValueError("empty confusion matrix")
    if (cm < 0).any():
        raise ValueError("confusion matrix counts must be nonnegative")
    return cm


def accuracy(cm) -> float:
    """Fraction of instances on the diagonal."""
    cm = _checked(cm)
    return float(np.trace(cm) / cm.sum())


def cohen_kappa(cm) -> float:
    """Agreement beyond chance: (p_o - p_e) / (1 - p_e).

    p_o is observed accuracy, p_e the agreement expected from the row and
    column marginals. A degenerate matrix with all mass in one cell has
    p_e = 1 and is scored 0.
    """
    cm = _checked(cm)
    total = cm.sum()
    p_obs = np.trace(cm) / total
    p_exp = float(cm.sum(axis=1) @ cm.sum(axis=0)) / (total * total)
    if p_exp >= 1.0:
        return 0.0
    return float((p_obs - p_exp) / (1.0 - p_exp))
