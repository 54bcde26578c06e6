"""One-vs-rest linear classifiers for policy segments.

Both trainers run seeded stochastic (sub)gradient descent over tf-idf
vectors, so retraining with the same seed reproduces weights bit for bit.
Logistic regression minimizes L2-regularized logistic loss; the SVM
minimizes the usual hinge objective with Pegasos-style 1/(lambda*t) steps.
"""
from __future__ import annotations

import base64
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import BinaryDataset, CategoryLabel, Segment
from .preprocess import SparseVector, TfidfVectorizer, TokenStream, normalize, tokenize
from .validation import check_fitted, require


def _as_columns(X: Sequence[SparseVector]):
    idx = [np.asarray(x.indices, dtype=np.int64) for x in X]
    val = [np.asarray(x.values, dtype=np.float64) for x in X]
    return idx, val


def _signed(y) -> np.ndarray:
    arr = np.asarray([1.0 if v else -1.0 for v in y])
    return arr


def logistic_objective(
    weights: np.ndarray, bias: float, X: Sequence[SparseVector], y, l2: float
) -> float:
    """Mean log-loss plus (l2/2)*||w||^2; the bias is unregularized."""
    s = _signed(y)
    total = 0.0
    for x, yi in zip(X, s):
        z = float(np.dot(weights[list(x.indices)], x.values)) + bias if x.indices else bias
        total += math.log1p(math.exp(-abs(yi * z))) + max(0.0, -yi * z)
    return total / len(X) + 0.5 * l2 * float(np.dot(weights, weights))


def logistic_gradient(
    weights: np.ndarray, bias: float, X: Sequence[SparseVector], y, l2: float
) -> tuple[np.ndarray, float]:
    """Full-batch gradient of :func:`logistic_objective`."""
    s = _signed(y)
    grad_w = l2 * weights.copy()
    grad_b = 0.0
    n = len(X)
    for x, yi in zip(X, s):
        z = float(np.dot(weights[list(x.indices)], x.values)) + bias if x.indices else bias
        coef = -yi / (1.0 + math.exp(yi * z)) / n
        if x.indices:
            grad_w[list(x.indices)] += coef * np.asarray(x.values)
        grad_b += coef
    return grad_w, grad_b


def hinge_objective(
    weights: np.ndarray, bias: float, X: Sequence[SparseVector], y, lam: float
) -> float:
    """Mean hinge loss plus (lam/2)*||w||^2."""
    s = _signed(y)
    total = 0.0
    for x, yi in zip(X, s):
        z = float(np.dot(weights[list(x.indices)], x.values)) + bias if x.indices else bias
        total += max(0.0, 1.0 - yi * z)
    return total / len(X) + 0.5 * lam * float(np.dot(weights, weights))


class _ScaledWeights:
    """w represented as scale * direction so L2 shrinkage stays O(nnz)."""

    def __init__(self, dim: int):
        self.scale = 1.0
        self.v = np.zeros(dim)

    def shrink(self, factor: float) -> None:
        if factor <= 0.0:
            self.v[:] = 0.0
            self.scale = 1.0
            return
        self.scale *= factor
        if self.scale < 1e-9:
            self.v *= self.scale
            self.scale = 1.0

    def add(self, indices, values, coef: float) -> None:
        self.v[indices] += (coef / self.scale) * values

    def dot(self, indices, values) -> float:
        if len(indices) == 0:
            return 0.0
        return self.scale * float(np.dot(self.v[indices], values))

    def dense(self) -> np.ndarray:
        return self.scale * self.v


class LogisticRegressionSGD(BaseEstimator):
    """L2-regularized logistic regression trained by seeded SGD.

    Epoch ``e`` (1-based) uses learning rate ``lr0 / e``; examples are visited
    in a fresh seeded permutation each epoch.
    """

    def __init__(self, l2: float = 1e-4, epochs: int = 50, lr0: float = 0.1, seed: int = 0):
        self.l2 = l2
        self.epochs = epochs
        self.lr0 = lr0
        self.seed = seed
        self.weights_: np.ndarray | None = None
        self.bias_: float | None = None

    def fit(self, X: Sequence[SparseVector], y) -> "LogisticRegressionSGD":
        s = _signed(y)
        require(len(X) == len(s), "X and y length mismatch")
        require(len(set(s.tolist())) == 2, "training data must contain both classes")
        dim = X[0].dimension
        idx, val = _as_columns(X)
        w = _ScaledWeights(dim)
        bias = 0.0
        rng = np.random.RandomState(self.seed)
        for epoch in range(1, self.epochs + 1):
            lr = self.lr0 / epoch
            for i in rng.permutation(len(X)):
                z = w.dot(idx[i], val[i]) + bias
                yi = s[i]
                sig = 1.0 / (1.0 + math.exp(min(yi * z, 700.0)))
                w.shrink(1.0 - lr * self.l2)
                if len(idx[i]):
                    w.add(idx[i], val[i], lr * yi * sig)
                bias += lr * yi * sig
        self.weights_ = w.dense()
        self.bias_ = float(bias)
        return self

    def decision_function(self, X: Sequence[SparseVector]) -> np.ndarray:
        check_fitted(self, ["weights_", "bias_"])
        return np.array([self.weights_[list(x.indices)] @ np.asarray(x.values) + self.bias_ if x.indices else self.bias_ for x in X])

    def predict_proba(self, X: Sequence[SparseVector]) -> np.ndarray:
        z = self.decision_function(X)
        return 1.0 / (1.0 + np.exp(-z))

    def predict(self, X: Sequence[SparseVector]) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(int)


class PegasosSVM(BaseEstimator):
    """Linear SVM trained by Pegasos stochastic subgradient descent.

    Global step ``t`` uses learning rate ``1 / (lam * (t + 1))``. There is no
    bias term: the decision surface passes through the origin, which keeps
    label-flip symmetry exact.
    """

    def __init__(self, lam: float = 1e-4, epochs: int = 50, seed: int = 0):
        self.lam = lam
        self.epochs = epochs
        self.seed = seed
        self.weights_: np.ndarray | None = None
        self.bias_: float | None = None

    def fit(self, X: Sequence[SparseVector], y) -> "PegasosSVM":
        s = _signed(y)
        require(len(X) == len(s), "X and y length mismatch")
        require(len(set(s.tolist())) == 2, "training data must contain both classes")
        dim = X[0].dimension
        idx, val = _as_columns(X)
        w = _ScaledWeights(dim)
        rng = np.random.RandomState(self.seed)
        t = 0
        for _ in range(self.epochs):
            for i in rng.permutation(len(X)):
                t += 1
                lr = 1.0 / (self.lam * (t + 1))
                z = w.dot(idx[i], val[i])
                yi = s[i]
                w.shrink(1.0 - lr * self.lam)
                if yi * z < 1.0 and len(idx[i]):
                    w.add(idx[i], val[i], lr * yi)
        self.weights_ = w.dense()
        self.bias_ = 0.0
        return self

    def decision_function(self, X: Sequence[SparseVector]) -> np.ndarray:
        check_fitted(self, ["weights_", "bias_"])
        return np.array([self.weights_[list(x.indices)] @ np.asarray(x.values) + self.bias_ if x.indices else self.bias_ for x in X])

    def predict(self, X: Sequence[SparseVector]) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(int)


@dataclass(frozen=True)
class LinearModel:
    """A trained binary model for one category, ready for prediction or disk."""

    kind: str  # "logreg" | "svm"
    category: CategoryLabel
    weights: np.ndarray
    bias: float
    decision_threshold: float
    vectorizer_hash: str = ""

    def __post_init__(self) -> None:
        require(self.kind in ("logreg", "svm"), f"unknown model kind: {self.kind}")
        require(bool(np.all(np.isfinite(self.weights))), "weights must be finite")
        require(math.isfinite(self.bias), "bias must be finite")


@dataclass(frozen=True)
class Prediction:
    score: float
    positive: bool


def predict(model: LinearModel, x: SparseVector) -> Prediction:
    """Score one vector; LR scores are probabilities, SVM scores raw margins."""
    require(
        x.dimension == len(model.weights),
        f"dimension mismatch: vector has {x.dimension}, model has {len(model.weights)}",
    )
    z = float(model.weights[list(x.indices)] @ np.asarray(x.values)) + model.bias if x.indices else model.bias
    if model.kind == "logreg":
        score = 1.0 / (1.0 + math.exp(-z))
    else:
        score = z
    return Prediction(score=score, positive=score >= model.decision_threshold)


def _vectorize_dataset(dataset: BinaryDataset, vectorizer: TfidfVectorizer, apply_normalize: bool):
    X = []
    y = []
    for segment, label in dataset.examples:
        tokens = tokenize(segment.text)
        if apply_normalize:
            tokens = normalize(tokens)
        X.append(vectorizer.transform_one(tokens))
        y.append(label)
    return X, y


def train_logreg(
    train: BinaryDataset,
    vectorizer: TfidfVectorizer,
    l2: float = 1e-4,
    epochs: int = 50,
    lr0: float = 0.1,
    seed: int = 0,
    apply_normalize: bool = True,
) -> LinearModel:
    X, y = _vectorize_dataset(train, vectorizer, apply_normalize)
    est = LogisticRegressionSGD(l2=l2, epochs=epochs, lr0=lr0, seed=seed).fit(X, y)
    return LinearModel(
        kind="logreg",
        category=train.category,
        weights=est.weights_,
        bias=est.bias_,
        decision_threshold=0.5,
        vectorizer_hash=vectorizer.content_hash(),
    )


def train_svm(
    train: BinaryDataset,
    vectorizer: TfidfVectorizer,
    lam: float = 1e-4,
    epochs: int = 50,
    seed: int = 0,
    apply_normalize: bool = True,
) -> LinearModel:
    X, y = _vectorize_dataset(train, vectorizer, apply_normalize)
    est = PegasosSVM(lam=lam, epochs=epochs, seed=seed).fit(X, y)
    return LinearModel(
        kind="svm",
        category=train.category,
        weights=est.weights_,
        bias=est.bias_,
        decision_threshold=0.0,
        vectorizer_hash=vectorizer.content_hash(),
    )


@dataclass(frozen=True)
class PRFMetrics:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    tn: int


def prf_from_counts(tp: int, fp: int, fn: int, tn: int) -> PRFMetrics:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRFMetrics(precision=precision, recall=recall, f1=f1, tp=tp, fp=fp, fn=fn, tn=tn)


def evaluate(
    model: LinearModel,
    test: BinaryDataset,
    vectorizer: TfidfVectorizer,
    apply_normalize: bool = True,
) -> PRFMetrics:
    """Positive-class precision/recall/F1 on a held-out dataset."""
    require(len(test.examples) > 0, "test set is empty")
    X, y = _vectorize_dataset(test, vectorizer, apply_normalize)
    tp = fp = fn = tn = 0
    for x, truth in zip(X, y):
        pred = predict(model, x).positive
        if pred and truth:
            tp += 1
        elif pred and not truth:
            fp += 1
        elif not pred and truth:
            fn += 1
        else:
            tn += 1
    return prf_from_counts(tp, fp, fn, tn)


@dataclass
class MultiLabelClassifier:
    """One trained model per category plus the shared vectorizer."""

    models: dict[CategoryLabel, LinearModel]
    vectorizer: TfidfVectorizer
    apply_normalize: bool = True

    def __post_init__(self) -> None:
        for category, model in self.models.items():
            require(model.category == category, "model registered under the wrong category")

    def scores(self, segment: Segment) -> dict[CategoryLabel, Prediction]:
        tokens = tokenize(segment.text)
        if self.apply_normalize:
            tokens = normalize(tokens)
        x = self.vectorizer.transform_one(tokens)
        return {category: predict(model, x) for category, model in self.models.items()}

    def labels_for(self, segment: Segment) -> set[CategoryLabel]:
        return classify_segment(self, segment)


def classify_segment(clf: MultiLabelClassifier, segment: Segment) -> set[CategoryLabel]:
    """Union of positive predictions; falls back to the top-scoring category.

    The fallback keeps every segment attached to at least one label so it can
    participate in requirement mapping.
    """
    require(len(clf.models) > 0, "classifier has no trained models")
    scores = clf.scores(segment)
    positive = {c for c, p in scores.items() if p.positive}
    if positive:
        return positive
    best = max(scores.items(), key=lambda item: (item[1].score, item[0].value))
    return {best[0]}


@dataclass(frozen=True)
class PredictionTable:
    """Side-loaded per-segment label sets (e.g. from an external classifier)."""

    labels: dict[tuple[str, int], frozenset[CategoryLabel]]

    def labels_for(self, segment: Segment) -> set[CategoryLabel]:
        return set(self.labels.get((segment.doc_id, segment.index), frozenset()))


def load_predictions(path: str | Path) -> PredictionTable:
    """Read a side-load file: doc_id TAB segment_index TAB comma-joined categories."""
    table: dict[tuple[str, int], frozenset[CategoryLabel]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
            doc_id, index_str, cats = parts
            labels = frozenset(CategoryLabel.parse(c.strip()) for c in cats.split(",") if c.strip())
            table[(doc_id, int(index_str))] = labels
    return PredictionTable(labels=table)


def save_model(model: LinearModel, path: str | Path) -> None:
    payload = {
        "version": 1,
        "kind": model.kind,
        "category": model.category.value,
        "weights": base64.b64encode(model.weights.astype("<f8").tobytes()).decode("ascii"),
        "bias": model.bias,
        "threshold": model.decision_threshold,
        "vectorizer_hash": model.vectorizer_hash,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_model(path: str | Path) -> LinearModel:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    require(raw.get("version") == 1, f"unsupported model file version: {raw.get('version')}")
    weights = np.frombuffer(base64.b64decode(raw["weights"]), dtype="<f8").astype(np.float64)
    return LinearModel(
        kind=raw["kind"],
        category=CategoryLabel.parse(raw["category"]),
        weights=weights,
        bias=float(raw["bias"]),
        decision_threshold=float(raw["threshold"]),
        vectorizer_hash=raw.get("vectorizer_hash", ""),
    )
