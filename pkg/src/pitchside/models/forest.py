"""Random forest of CART trees with out-of-bag error estimation.

Each tree bootstraps n samples with replacement and greedily splits on
the Gini criterion, considering ceil(sqrt(p)) randomly drawn features per
node, growing until nodes are pure or unsplittable. Every tree owns an
RNG stream derived from (forest seed, tree index), so the forest is
reproducible bit for bit and independent of training order.
"""

import math
from dataclasses import dataclass

import numpy as np


def _majority(counts: np.ndarray) -> int:
    return int(np.argmax(counts))  # ties resolve to the lowest class index


def _gini(counts: np.ndarray, total: float) -> float:
    if total <= 0:
        return 0.0
    fractions = counts / total
    return 1.0 - float((fractions * fractions).sum())


@dataclass(frozen=True)
class DecisionTree:
    """Flat-array binary tree: feature[i] == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # majority class at the node

    def predict(self, matrix: np.ndarray) -> np.ndarray:
        out = np.empty(matrix.shape[0], dtype=np.int64)
        feature, threshold = self.feature, self.threshold
        left, right, value = self.left, self.right, self.value
        for i, row in enumerate(matrix):
            node = 0
            while feature[node] >= 0:
                node = left[node] if row[feature[node]] <= threshold[node] else right[node]
            out[i] = value[node]
        return out

    @property
    def n_nodes(self) -> int:
        return len(self.feature)


class _TreeBuilder:
    def __init__(self, matrix, labels, mtry, n_classes, min_leaf, rng):
        self.matrix = matrix
        self.labels = labels
        self.mtry = mtry
        self.n_classes = n_classes
        self.min_leaf = min_leaf
        self.rng = rng
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []

    def build(self, indices) -> DecisionTree:
        # explicit pre-order stack: deep trees must not hit the recursion limit
        stack = [(indices, -1, False)]
        while stack:
            node_indices, parent, is_left = stack.pop()
            y = self.labels[node_indices]
            counts = np.bincount(y, minlength=self.n_classes).astype(np.float64)
            node = self._new_node(_majority(counts))
            if parent >= 0:
                if is_left:
                    self.left[parent] = node
                else:
                    self.right[parent] = node
            n = node_indices.size
            if n < 2 * self.min_leaf or _gini(counts, n) == 0.0:
                continue
            split = self._best_split(node_indices, counts, n)
            if split is None:
                continue
            feature_idx, cut, left_mask = split
            self.feature[node] = feature_idx
            self.threshold[node] = cut
            stack.append((node_indices[~left_mask], node, False))
            stack.append((node_indices[left_mask], node, True))
        return DecisionTree(
            feature=np.asarray(self.feature, dtype=np.int32),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int32),
            right=np.asarray(self.right, dtype=np.int32),
            value=np.asarray(self.value, dtype=np.int32),
        )

    def _new_node(self, majority) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(majority)
        return len(self.feature) - 1

    def _best_split(self, indices, counts, n):
        p = self.matrix.shape[1]
        candidates = self.rng.choice(p, size=min(self.mtry, p), replace=False)
        parent_gini = _gini(counts, n)
        best = None
        best_score = parent_gini  # only accept splits that reduce impurity
        y = self.labels[indices]
        onehot = np.zeros((n, self.n_classes))
        onehot[np.arange(n), y] = 1.0
        for feature_idx in candidates:
            values = self.matrix[indices, feature_idx]
            order = np.argsort(values, kind="stable")
            ordered = values[order]
            boundaries = np.nonzero(ordered[:-1] < ordered[1:])[0]
            if boundaries.size == 0:
                continue
            prefix = np.cumsum(onehot[order], axis=0)
            n_left = (boundaries + 1).astype(np.float64)
            n_right = n - n_left
            valid = (n_left >= self.min_leaf) & (n_right >= self.min_leaf)
            if not valid.any():
                continue
            left_counts = prefix[boundaries]
            right_counts = counts - left_counts
            gini_left = 1.0 - ((left_counts / n_left[:, None]) ** 2).sum(axis=1)
            gini_right = 1.0 - ((right_counts / n_right[:, None]) ** 2).sum(axis=1)
            weighted = (n_left * gini_left + n_right * gini_right) / n
            weighted = np.where(valid, weighted, np.inf)
            at = int(np.argmin(weighted))  # first minimum: lowest cut wins ties
            if weighted[at] < best_score:
                best_score = float(weighted[at])
                boundary = int(boundaries[at])
                cut = float((ordered[boundary] + ordered[boundary + 1]) / 2.0)
                best = (int(feature_idx), cut, values <= cut)
        return best


@dataclass(frozen=True)
class RandomForestModel:
    """Trained forest plus its out-of-bag tallies.

    ``oob_votes[i, c]`` counts trees without sample i in their bootstrap
    that voted class c for it. ``oob_error`` is None when no training
    sample was ever out of bag.
    """

    classes: tuple
    n_features: int
    trees: tuple
    seed: int
    mtry: int
    oob_votes: np.ndarray
    oob_error: float | None
    oob_confusion: np.ndarray | None
    oob_covered: int

    def _check(self, matrix) -> np.ndarray:
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        if matrix.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features,"
                             f" got {matrix.shape[1]}")
        return matrix

    def predict_votes(self, matrix) -> np.ndarray:
        matrix = self._check(matrix)
        votes = np.zeros((matrix.shape[0], len(self.classes)), dtype=np.int64)
        for tree in self.trees:
            predictions = tree.predict(matrix)
            votes[np.arange(matrix.shape[0]), predictions] += 1
        return votes

    def predict(self, matrix) -> np.ndarray:
        return np.argmax(self.predict_votes(matrix), axis=1)

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def oob_predictions(oob_votes: np.ndarray):
    """(indices, predicted classes) for samples with at least one OOB vote."""
    covered = np.nonzero(oob_votes.sum(axis=1) > 0)[0]
    return covered, np.argmax(oob_votes[covered], axis=1)


def train_forest(matrix, labels, n_trees: int = 100, seed: int = 0,
                 mtry: int | None = None, min_leaf: int = 1,
                 n_classes: int = 3) -> RandomForestModel:
    """Train a forest and score it by out-of-bag majority vote.

    Reproducibility contract: identical (matrix, labels, n_trees, seed,
    mtry, min_leaf) give an identical forest, tree by tree.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    labels = np.asarray(labels, dtype=np.int64)
    if matrix.shape[0] != labels.shape[0]:
        raise ValueError("matrix and labels length mismatch")
    if matrix.shape[0] == 0:
        raise ValueError("empty training set")
    if labels.min() < 0 or labels.max() >= n_classes:
        raise ValueError(f"labels outside 0..{n_classes - 1}")
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    n, p = matrix.shape
    if mtry is None:
        mtry = max(1, math.ceil(math.sqrt(p)))
    if not 1 <= mtry <= p:
        raise ValueError(f"mtry must be in 1..{p}")

    trees = []
    oob_votes = np.zeros((n, n_classes), dtype=np.int64)
    for tree_index in range(n_trees):
        rng = np.random.default_rng(np.random.SeedSequence([seed, tree_index]))
        bootstrap = rng.integers(0, n, size=n)
        builder = _TreeBuilder(matrix, labels, mtry, n_classes, min_leaf, rng)
        tree = builder.build(bootstrap)
        trees.append(tree)
        in_bag = np.zeros(n, dtype=bool)
        in_bag[bootstrap] = True
        out_idx = np.nonzero(~in_bag)[0]
        if out_idx.size:
            predictions = tree.predict(matrix[out_idx])
            oob_votes[out_idx, predictions] += 1

    covered, predicted = oob_predictions(oob_votes)
    if covered.size:
        oob_error = float(np.mean(predicted != labels[covered]))
        confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
        for truth, pred in zip(labels[covered], predicted):
            confusion[truth, pred] += 1
    else:
        oob_error = None
        confusion = None
    return RandomForestModel(classes=tuple(range(n_classes)), n_features=p,
                             trees=tuple(trees), seed=int(seed), mtry=int(mtry),
                             oob_votes=oob_votes, oob_error=oob_error,
                             oob_confusion=confusion, oob_covered=int(covered.size))
