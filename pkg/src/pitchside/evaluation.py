"""Leave-one-out evaluation, seed sweeps and feature-count sweeps.

All entry points are deterministic: identical configuration and
instances produce byte-identical reports, for any worker count. Folds
are independent work units keyed by instance index; random forests
inside fold i draw their seed from (run seed, i).
"""

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import pipeline
from .matches import CLASSES
from .models.forest import train_forest
from .models.logistic import (DEFAULT_L2, DEFAULT_MAX_ITER, DEFAULT_TOL,
                              train_logistic)
from .models.metrics import accuracy, cohen_kappa, confusion_matrix
from .models.naive_bayes import train_nb
from .util import derive_seed

DATASETS = ("twitter", "historical", "combined")
MODELS = ("nb", "logistic", "rf")
SELECTION_MODES = ("per-fold", "global")
K_MIN, K_MAX = 1, 35
RF_TREES_MIN, RF_TREES_MAX = 1, 1000

K_SWEEP_COLUMNS = ["k", "scorer", "order", "metric", "value"]


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class EvalConfig:
    """One evaluation configuration.

    ``selection`` controls where n-gram rankings are fitted: "per-fold"
    recomputes them from each fold's training instances (leakage-safe
    default), "global" fits once on the full dataset. ``workers`` only
    schedules work and never appears in reports.
    """

    dataset: str = "twitter"
    model: str = "rf"
    scorer: str = "chi2"
    orders: tuple = (1, 2)
    k: int = 10
    min_df: int = 2
    weighting: str = "relfreq"
    selection: str = "per-fold"
    rf_trees: int = 100
    seed: int = 0
    l2: float = DEFAULT_L2
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    workers: int = 1

    def validate(self):
        from .features import SCORERS, WEIGHTINGS
        if self.dataset not in DATASETS:
            raise EvalError(f"unknown dataset {self.dataset!r}")
        if self.model not in MODELS:
            raise EvalError(f"unknown model {self.model!r}")
        if self.scorer not in SCORERS:
            raise EvalError(f"unknown scorer {self.scorer!r}")
        if self.weighting not in WEIGHTINGS:
            raise EvalError(f"unknown weighting {self.weighting!r}")
        if self.selection not in SELECTION_MODES:
            raise EvalError(f"unknown selection mode {self.selection!r}")
        orders = tuple(self.orders)
        if not orders or any(o not in (1, 2) for o in orders):
            raise EvalError(f"orders must be a nonempty subset of (1, 2), got {orders}")
        if not K_MIN <= self.k <= K_MAX:
            raise EvalError(f"k must be in {K_MIN}..{K_MAX}, got {self.k}")
        if not RF_TREES_MIN <= self.rf_trees <= RF_TREES_MAX:
            raise EvalError(f"rf_trees must be in {RF_TREES_MIN}..{RF_TREES_MAX}")
        if self.min_df < 1:
            raise EvalError("min_df must be >= 1")
        if self.workers < 1:
            raise EvalError("workers must be >= 1")
        return self

    @property
    def order_label(self) -> str:
        return "+".join(str(o) for o in self.orders)

    def report_dict(self) -> dict:
        # workers is execution scheduling, not an experimental setting
        return {
            "dataset": self.dataset, "model": self.model, "scorer": self.scorer,
            "orders": list(self.orders), "k": self.k, "min_df": self.min_df,
            "weighting": self.weighting, "selection": self.selection,
            "rf_trees": self.rf_trees, "seed": self.seed, "l2": self.l2,
            "max_iter": self.max_iter, "tol": self.tol,
        }


def _train_model(config: EvalConfig, matrix, labels, rf_seed: int):
    if config.model == "nb":
        return train_nb(matrix, labels, n_classes=len(CLASSES))
    if config.model == "logistic":
        return train_logistic(matrix, labels, n_classes=len(CLASSES), l2=config.l2,
                              max_iter=config.max_iter, tol=config.tol)
    return train_forest(matrix, labels, n_trees=config.rf_trees, seed=rf_seed,
                        n_classes=len(CLASSES))


def _fold_feature_set(train_instances, config: EvalConfig, global_fs):
    if config.dataset == "historical":
        return None
    if config.selection == "global":
        return global_fs
    return pipeline.select_feature_set(train_instances, scorer=config.scorer,
                                       k=config.k, min_df=config.min_df)


def _run_fold(instances, config: EvalConfig, fold: int, global_fs):
    """One LOOCV fold. Returns (fold, match_id, true, pred-or-None)."""
    test = instances[fold]
    train = instances[:fold] + instances[fold + 1:]
    labels = np.asarray([inst.label for inst in train], dtype=np.int64)
    if np.unique(labels).size < 2:
        return (fold, test.match_id, test.label, None)
    feature_set = _fold_feature_set(train, config, global_fs)
    x_train = pipeline.dataset_matrix(train, config.dataset, feature_set,
                                      config.weighting)
    x_test = pipeline.dataset_matrix([test], config.dataset, feature_set,
                                     config.weighting)
    model = _train_model(config, x_train, labels,
                         rf_seed=derive_seed(config.seed, fold))
    return (fold, test.match_id, test.label, int(model.predict(x_test)[0]))


def _run_fold_chunk(args):
    instances, config, folds, global_fs = args
    return [_run_fold(instances, config, fold, global_fs) for fold in folds]


@dataclass
class LoocvResult:
    predictions: list           # (fold, match_id, true, pred) for scored folds
    skipped: list               # (fold, match_id) for single-class training sets
    confusion: np.ndarray

    @property
    def accuracy(self) -> float:
        return accuracy(self.confusion)

    @property
    def kappa(self) -> float:
        return cohen_kappa(self.confusion)

    def as_dict(self) -> dict:
        return {
            "estimator": "loocv",
            "n_scored": len(self.predictions),
            "n_skipped": len(self.skipped),
            "skipped": [list(s) for s in self.skipped],
            "confusion": self.confusion.tolist(),
            "accuracy": self.accuracy,
            "kappa": self.kappa,
            "predictions": [list(p) for p in self.predictions],
        }


def loocv(instance_set, config: EvalConfig) -> LoocvResult:
    """Leave-one-out cross-validation over an instance set.

    Folds whose training labels collapse to one class are skipped and
    listed. Fold scheduling across workers never changes the result.
    """
    config.validate()
    instances = list(instance_set.instances)
    n = len(instances)
    if n < 3:
        raise EvalError(f"need at least 3 instances for leave-one-out, got {n}")
    if np.unique([inst.label for inst in instances]).size < 2:
        raise EvalError("need at least 2 outcome classes")
    if config.dataset in ("historical", "combined") and not instance_set.has_historical():
        raise EvalError(f"dataset {config.dataset!r} needs historical vectors"
                        " for every instance")
    global_fs = None
    if config.dataset != "historical" and config.selection == "global":
        global_fs = pipeline.select_feature_set(instances, scorer=config.scorer,
                                                k=config.k, min_df=config.min_df)
    folds = list(range(n))
    if config.workers > 1 and n > 1:
        chunks = [folds[i::config.workers] for i in range(config.workers)]
        chunks = [c for c in chunks if c]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_run_fold_chunk,
                                  [(instances, config, c, global_fs) for c in chunks]))
        results = sorted(r for part in parts for r in part)
    else:
        results = [_run_fold(instances, config, fold, global_fs) for fold in folds]

    predictions = [r for r in results if r[3] is not None]
    skipped = [(r[0], r[1]) for r in results if r[3] is None]
    if not predictions:
        raise EvalError("every fold was skipped; no predictions to score")
    cm = confusion_matrix([p[2] for p in predictions],
                          [p[3] for p in predictions], len(CLASSES))
    return LoocvResult(predictions=predictions, skipped=skipped, confusion=cm)


def full_data_forest(instance_set, config: EvalConfig):
    """Forest trained on every instance; its out-of-bag tallies estimate
    test error. Feature selection necessarily uses the full data here."""
    config.validate()
    if config.model != "rf":
        raise EvalError("out-of-bag estimation requires the rf model")
    instances = list(instance_set.instances)
    feature_set = None
    if config.dataset != "historical":
        feature_set = pipeline.select_feature_set(instances, scorer=config.scorer,
                                                  k=config.k, min_df=config.min_df)
    matrix = pipeline.dataset_matrix(instances, config.dataset, feature_set,
                                     config.weighting)
    labels = instance_set.labels()
    return train_forest(matrix, labels, n_trees=config.rf_trees, seed=config.seed,
                        n_classes=len(CLASSES))


def _oob_section(model) -> dict:
    if model.oob_confusion is None:
        return {"estimator": "oob", "covered": 0, "error": None,
                "accuracy": None, "kappa": None, "confusion": None}
    return {
        "estimator": "oob",
        "covered": model.oob_covered,
        "error": model.oob_error,
        "accuracy": accuracy(model.oob_confusion),
        "kappa": cohen_kappa(model.oob_confusion),
        "confusion": model.oob_confusion.tolist(),
    }


def _aggregate(values) -> dict:
    data = np.asarray(values, dtype=np.float64)
    sd = float(data.std(ddof=1)) if data.size >= 2 else 0.0
    return {"mean": float(data.mean()), "sd": sd,
            "min": float(data.min()), "max": float(data.max())}


def seed_sweep(instance_set, config: EvalConfig, seeds) -> dict:
    """Repeat the rf evaluation once per seed and aggregate the spread.

    Each round reports the LOOCV metrics and the full-data out-of-bag
    metrics side by side.
    """
    config.validate()
    if config.model != "rf":
        raise EvalError("seed sweeps are defined for the rf model")
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise EvalError("need at least one seed")
    if len(set(seeds)) != len(seeds):
        raise EvalError("seeds must be distinct")
    rounds = []
    for seed in seeds:
        round_config = replace(config, seed=seed)
        cv = loocv(instance_set, round_config)
        forest = full_data_forest(instance_set, round_config)
        oob = _oob_section(forest)
        rounds.append({
            "seed": seed,
            "loocv_accuracy": cv.accuracy,
            "loocv_kappa": cv.kappa,
            "oob_accuracy": oob["accuracy"],
            "oob_kappa": oob["kappa"],
        })
    aggregates = {}
    for metric in ("loocv_accuracy", "loocv_kappa", "oob_accuracy", "oob_kappa"):
        values = [r[metric] for r in rounds if r[metric] is not None]
        if values:
            aggregates[metric] = _aggregate(values)
    return {
        "config": config.report_dict(),
        "n_seeds": len(seeds),
        "rounds": rounds,
        "aggregates": aggregates,
    }


def k_sweep(instance_set, config: EvalConfig, k_values) -> list:
    """Error-versus-k curve rows: out-of-bag error for rf, LOOCV error
    otherwise. Row order follows ``k_values``."""
    config.validate()
    rows = []
    for k in k_values:
        k_config = replace(config, k=int(k)).validate()
        if config.model == "rf":
            forest = full_data_forest(instance_set, k_config)
            value = forest.oob_error
            metric = "oob_error"
        else:
            cv = loocv(instance_set, k_config)
            value = 1.0 - cv.accuracy
            metric = "loocv_error"
        rows.append({"k": int(k), "scorer": config.scorer,
                     "order": config.order_label, "metric": metric,
                     "value": value})
    return rows


def write_k_sweep_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(K_SWEEP_COLUMNS)
        for row in rows:
            value = row["value"]
            writer.writerow([row["k"], row["scorer"], row["order"], row["metric"],
                             "" if value is None else repr(float(value))])


def compare_datasets(instance_set, config: EvalConfig) -> dict:
    """Evaluate twitter-only, historical-only and combined on the same
    matches, enabling paired comparison."""
    config.validate()
    if not instance_set.has_historical():
        raise EvalError("paired comparison needs historical vectors for"
                        " every instance")
    if len(instance_set) == 0:
        raise EvalError("no instances to compare")
    sections = {}
    for dataset in DATASETS:
        ds_config = replace(config, dataset=dataset)
        section = {"loocv": loocv(instance_set, ds_config).as_dict()}
        if config.model == "rf":
            section["oob"] = _oob_section(full_data_forest(instance_set, ds_config))
        sections[dataset] = section
    return {
        "config": config.report_dict(),
        "n_instances": len(instance_set),
        "excluded_match_ids": list(instance_set.excluded_match_ids),
        "excluded_count": len(instance_set.excluded_match_ids),
        "datasets": sections,
    }


def render_report_text(report: dict) -> str:
    """Aligned human-readable table for a compare_datasets report."""
    lines = []
    config = report.get("config", {})
    lines.append("model={model} scorer={scorer} orders={orders} k={k} "
                 "selection={selection} seed={seed}".format(
                     model=config.get("model"), scorer=config.get("scorer"),
                     orders="+".join(str(o) for o in config.get("orders", [])),
                     k=config.get("k"), selection=config.get("selection"),
                     seed=config.get("seed")))
    lines.append(f"instances={report.get('n_instances')} "
                 f"excluded={report.get('excluded_count')}")
    header = f"{'dataset':<12} {'estimator':<10} {'accuracy':>9} {'kappa':>8}"
    lines.append(header)
    lines.append("-" * len(header))
    for dataset in DATASETS:
        section = report.get("datasets", {}).get(dataset)
        if not section:
            continue
        for estimator in ("loocv", "oob"):
            part = section.get(estimator)
            if not part or part.get("accuracy") is None:
                continue
            lines.append(f"{dataset:<12} {estimator:<10} "
                         f"{part['accuracy']:>9.4f} {part['kappa']:>8.4f}")
    return "\n".join(lines) + "\n"


def render_seed_sweep_text(report: dict) -> str:
    """Mean/sd/min/max table for a seed sweep report."""
    lines = []
    config = report.get("config", {})
    lines.append(f"dataset={config.get('dataset')} model={config.get('model')} "
                 f"k={config.get('k')} rounds={report.get('n_seeds')}")
    header = f"{'metric':<16} {'mean':>8} {'sd':>8} {'min':>8} {'max':>8}"
    lines.append(header)
    lines.append("-" * len(header))
    for metric, agg in sorted(report.get("aggregates", {}).items()):
        lines.append(f"{metric:<16} {agg['mean']:>8.4f} {agg['sd']:>8.4f} "
                     f"{agg['min']:>8.4f} {agg['max']:>8.4f}")
    return "\n".join(lines) + "\n"
