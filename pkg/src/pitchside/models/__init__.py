"""Native classifiers (naive Bayes, logistic regression, random forest)
and the agreement metrics used to score them."""

from .metrics import accuracy, cohen_kappa, confusion_matrix
from .naive_bayes import NaiveBayesModel, train_nb
from .logistic import LogisticModel, train_logistic
from .forest import RandomForestModel, train_forest
from .io import save_model, load_model

__all__ = [
    "accuracy", "cohen_kappa", "confusion_matrix",
    "NaiveBayesModel", "train_nb",
    "LogisticModel", "train_logistic",
    "RandomForestModel", "train_forest",
    "save_model", "load_model",
]
