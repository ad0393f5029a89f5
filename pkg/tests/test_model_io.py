import numpy as np
import pytest

from pitchside.models.forest import train_forest
from pitchside.models.io import (FORMAT_VERSION, ModelIOError, load_model,
                                 model_from_dict, model_to_dict, save_model)
from pitchside.models.logistic import train_logistic
from pitchside.models.naive_bayes import train_nb


def sample_data(rng, binary=False):
    centers = np.array([[0.0, 0.0, 0.0], [3.0, 0.0, 1.0], [0.0, 3.0, 2.0]])
    labels = np.repeat([0, 1, 2], 15)
    matrix = centers[labels] + rng.normal(0, 0.4, (45, 3))
    if binary:
        matrix = (matrix > 1.0).astype(np.float64)
    return matrix, labels


def check_same_predictions(model, clone, matrix):
    np.testing.assert_array_equal(model.predict(matrix), clone.predict(matrix))


def test_gaussian_nb_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    matrix, labels = sample_data(rng)
    model = train_nb(matrix, labels)
    path = tmp_path / "nb.json"
    save_model(model, path)
    clone = load_model(path)
    assert clone.variant == "gaussian"
    np.testing.assert_array_equal(clone.means, model.means)
    np.testing.assert_array_equal(clone.variances, model.variances)
    np.testing.assert_array_equal(clone.log_priors, model.log_priors)
    check_same_predictions(model, clone, matrix)


def test_bernoulli_nb_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    matrix, labels = sample_data(rng, binary=True)
    model = train_nb(matrix, labels)
    path = tmp_path / "nb.json"
    save_model(model, path)
    clone = load_model(path)
    assert clone.variant == "bernoulli"
    assert clone.variances is None
    check_same_predictions(model, clone, matrix)


def test_infinite_prior_survives_round_trip(tmp_path):
    # class 1 missing from training: its log prior is -inf, stored as null
    matrix = np.array([[0.0], [1.0], [10.0], [11.0]])
    model = train_nb(matrix, [0, 0, 2, 2], n_classes=3)
    path = tmp_path / "nb.json"
    save_model(model, path)
    clone = load_model(path)
    assert clone.log_priors[1] == -np.inf
    np.testing.assert_array_equal(clone.log_priors, model.log_priors)


def test_logistic_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    matrix, labels = sample_data(rng)
    model = train_logistic(matrix, labels)
    path = tmp_path / "lr.json"
    save_model(model, path)
    clone = load_model(path)
    np.testing.assert_array_equal(clone.weights, model.weights)
    np.testing.assert_array_equal(clone.center, model.center)
    np.testing.assert_array_equal(clone.scale, model.scale)
    assert clone.converged == model.converged
    assert clone.iterations == model.iterations
    assert clone.final_loss == model.final_loss
    np.testing.assert_array_equal(clone.predict_proba(matrix),
                                  model.predict_proba(matrix))


def test_forest_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    matrix, labels = sample_data(rng)
    model = train_forest(matrix, labels, n_trees=10, seed=4)
    path = tmp_path / "rf.json"
    save_model(model, path)
    clone = load_model(path)
    assert clone.n_trees == model.n_trees
    assert clone.seed == model.seed and clone.mtry == model.mtry
    for ta, tb in zip(model.trees, clone.trees):
        np.testing.assert_array_equal(ta.feature, tb.feature)
        np.testing.assert_array_equal(ta.threshold, tb.threshold)
    np.testing.assert_array_equal(clone.oob_votes, model.oob_votes)
    assert clone.oob_error == model.oob_error
    np.testing.assert_array_equal(clone.oob_confusion, model.oob_confusion)
    check_same_predictions(model, clone, matrix)


def test_saving_twice_is_byte_identical(tmp_path):
    rng = np.random.default_rng(5)
    matrix, labels = sample_data(rng)
    model = train_forest(matrix, labels, n_trees=5, seed=0)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_model(model, a)
    save_model(model, b)
    assert a.read_bytes() == b.read_bytes()


def test_floats_round_trip_exactly(tmp_path):
    rng = np.random.default_rng(6)
    matrix, labels = sample_data(rng)
    model = train_logistic(matrix, labels)
    path = tmp_path / "lr.json"
    save_model(model, path)
    clone = load_model(path)
    assert clone.weights.tobytes() == model.weights.tobytes()


def test_unknown_kind_rejected():
    with pytest.raises(ModelIOError, match="unknown model kind"):
        model_from_dict({"format_version": FORMAT_VERSION, "kind": "svm"})


def test_wrong_version_rejected():
    rng = np.random.default_rng(7)
    matrix, labels = sample_data(rng)
    payload = model_to_dict(train_nb(matrix, labels))
    payload["format_version"] = FORMAT_VERSION + 1
    with pytest.raises(ModelIOError, match="format version"):
        model_from_dict(payload)
    with pytest.raises(ModelIOError, match="format version"):
        model_from_dict({"kind": "naive_bayes"})


def test_unserializable_object_rejected():
    with pytest.raises(ModelIOError, match="cannot serialize"):
        model_to_dict(object())
