"""Versioned model serialization.

JSON with sorted keys and exact float round-tripping: saving the same
model twice produces identical bytes. Not meant to be stable across
package versions.
"""

import numpy as np

from ..util import atomic_write_json, read_json
from .forest import DecisionTree, RandomForestModel
from .logistic import LogisticModel
from .naive_bayes import NaiveBayesModel

FORMAT_VERSION = 1


class ModelIOError(ValueError):
    pass


def _array(values, dtype):
    return np.asarray(values, dtype=dtype)


def _encode_priors(log_priors) -> list:
    # classes absent from training have -inf prior, which JSON cannot carry
    return [None if not np.isfinite(v) else float(v) for v in log_priors]


def _decode_priors(values) -> np.ndarray:
    return np.asarray([-np.inf if v is None else v for v in values],
                      dtype=np.float64)


def model_to_dict(model) -> dict:
    if isinstance(model, NaiveBayesModel):
        payload = {
            "kind": "naive_bayes",
            "variant": model.variant,
            "classes": list(model.classes),
            "log_priors": _encode_priors(model.log_priors),
            "means": model.means.tolist(),
            "variances": None if model.variances is None else model.variances.tolist(),
        }
    elif isinstance(model, LogisticModel):
        payload = {
            "kind": "logistic",
            "classes": list(model.classes),
            "weights": model.weights.tolist(),
            "center": model.center.tolist(),
            "scale": model.scale.tolist(),
            "converged": model.converged,
            "iterations": model.iterations,
            "final_loss": model.final_loss,
        }
    elif isinstance(model, RandomForestModel):
        payload = {
            "kind": "random_forest",
            "classes": list(model.classes),
            "n_features": model.n_features,
            "seed": model.seed,
            "mtry": model.mtry,
            "trees": [{
                "feature": tree.feature.tolist(),
                "threshold": tree.threshold.tolist(),
                "left": tree.left.tolist(),
                "right": tree.right.tolist(),
                "value": tree.value.tolist(),
            } for tree in model.trees],
            "oob_votes": model.oob_votes.tolist(),
            "oob_error": model.oob_error,
            "oob_confusion": None if model.oob_confusion is None
                             else model.oob_confusion.tolist(),
            "oob_covered": model.oob_covered,
        }
    else:
        raise ModelIOError(f"cannot serialize {type(model).__name__}")
    payload["format_version"] = FORMAT_VERSION
    return payload


def model_from_dict(payload: dict):
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelIOError(f"unsupported model format version {version!r}")
    kind = payload.get("kind")
    if kind == "naive_bayes":
        variances = payload["variances"]
        return NaiveBayesModel(
            variant=payload["variant"],
            classes=tuple(payload["classes"]),
            log_priors=_decode_priors(payload["log_priors"]),
            means=_array(payload["means"], np.float64),
            variances=None if variances is None else _array(variances, np.float64),
        )
    if kind == "logistic":
        return LogisticModel(
            classes=tuple(payload["classes"]),
            weights=_array(payload["weights"], np.float64),
            center=_array(payload["center"], np.float64),
            scale=_array(payload["scale"], np.float64),
            converged=bool(payload["converged"]),
            iterations=int(payload["iterations"]),
            final_loss=float(payload["final_loss"]),
        )
    if kind == "random_forest":
        trees = tuple(
            DecisionTree(
                feature=_array(t["feature"], np.int32),
                threshold=_array(t["threshold"], np.float64),
                left=_array(t["left"], np.int32),
                right=_array(t["right"], np.int32),
                value=_array(t["value"], np.int32),
            ) for t in payload["trees"])
        confusion = payload["oob_confusion"]
        return RandomForestModel(
            classes=tuple(payload["classes"]),
            n_features=int(payload["n_features"]),
            trees=trees,
            seed=int(payload["seed"]),
            mtry=int(payload["mtry"]),
            oob_votes=_array(payload["oob_votes"], np.int64),
            oob_error=None if payload["oob_error"] is None else float(payload["oob_error"]),
            oob_confusion=None if confusion is None else _array(confusion, np.int64),
            oob_covered=int(payload["oob_covered"]),
        )
    raise ModelIOError(f"unknown model kind {kind!r}")


def save_model(model, path):
    atomic_write_json(path, model_to_dict(model))


def load_model(path):
    return model_from_dict(read_json(path))
