from fractions import Fraction

import numpy as np
import pytest

from pitchside.models.metrics import accuracy, cohen_kappa, confusion_matrix


def exact_kappa(cm):
    """Oracle in exact rational arithmetic."""
    cm = [[Fraction(int(v)) for v in row] for row in cm]
    total = sum(sum(row) for row in cm)
    p_obs = sum(cm[i][i] for i in range(len(cm))) / total
    p_exp = sum(sum(row) * sum(col) for row, col in zip(cm, zip(*cm))) / total ** 2
    if p_exp >= 1:
        return 0.0
    return float((p_obs - p_exp) / (1 - p_exp))


def test_confusion_matrix_counts():
    cm = confusion_matrix([0, 1, 2, 2, 0], [0, 2, 2, 1, 0], 3)
    expected = np.array([[2, 0, 0], [0, 0, 1], [0, 1, 1]])
    np.testing.assert_array_equal(cm, expected)


def test_confusion_matrix_rejects_out_of_range():
    with pytest.raises(ValueError):
        confusion_matrix([0, 3], [0, 0], 3)
    with pytest.raises(ValueError):
        confusion_matrix([0], [-1], 3)


def test_accuracy_hand_value():
    assert accuracy([[2, 1], [1, 2]]) == pytest.approx(4 / 6, abs=1e-12)


def test_kappa_hand_value():
    # p_o = 4/6, p_e = (3*3 + 3*3)/36 = 1/2, kappa = (2/3 - 1/2)/(1/2)
    assert cohen_kappa([[2, 1], [1, 2]]) == pytest.approx(1 / 3, abs=1e-12)


def test_kappa_perfect_and_worst():
    assert cohen_kappa([[5, 0, 0], [0, 5, 0], [0, 0, 5]]) == pytest.approx(1.0)
    assert cohen_kappa([[0, 5], [5, 0]]) == pytest.approx(-1.0)


def test_kappa_chance_level_is_zero():
    # both raters uniform and independent
    cm = [[4, 4], [4, 4]]
    assert cohen_kappa(cm) == pytest.approx(0.0, abs=1e-12)


def test_kappa_single_cell_degenerate():
    assert cohen_kappa([[7, 0], [0, 0]]) == 0.0
    assert cohen_kappa([[0, 0, 0], [0, 9, 0], [0, 0, 0]]) == 0.0


def test_kappa_matches_exact_oracle_on_random_matrices():
    rng = np.random.default_rng(12345)
    for _ in range(1000):
        cm = rng.integers(0, 10, size=(3, 3))
        if cm.sum() == 0:
            continue
        assert cohen_kappa(cm) == pytest.approx(exact_kappa(cm), abs=1e-12)
        assert accuracy(cm) == pytest.approx(np.trace(cm) / cm.sum(), abs=1e-12)


def test_kappa_invariant_to_simultaneous_class_permutation():
    rng = np.random.default_rng(6)
    cm = rng.integers(0, 12, size=(3, 3))
    base = cohen_kappa(cm)
    for perm in ([1, 2, 0], [2, 0, 1], [0, 2, 1]):
        permuted = cm[np.ix_(perm, perm)]
        assert cohen_kappa(permuted) == pytest.approx(base, abs=1e-12)


def test_metrics_reject_bad_shapes():
    with pytest.raises(ValueError):
        accuracy([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(ValueError):
        cohen_kappa([[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        cohen_kappa([[1, -1], [0, 2]])


def test_kappa_below_zero_for_systematic_disagreement():
    cm = [[0, 5, 1], [5, 0, 1], [1, 1, 4]]
    value = cohen_kappa(cm)
    assert value == pytest.approx(exact_kappa(cm), abs=1e-12)
    assert value < 0
