"""Multinomial logistic regression with L2 penalty, plus stratified
cross-validation.

Features are standardized with statistics of the training split only.
The objective is mean cross-entropy plus (lam / 2) * ||W||^2 over the
class weight matrix; intercepts are unpenalized.  Optimization is L-BFGS
from a zero start, so fits are deterministic.

Fold assignment uses a splitmix64-seeded Fisher-Yates shuffle per class.
The generator is spelled out here (rather than taken from numpy) so that
consumers in other languages can reproduce the exact same fold plan from
the same seed.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateInputError, FitError, GraphInputError

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic PRNG (splitmix64), portable across languages."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection of the biased tail."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = _MASK64 - (_MASK64 + 1) % bound
        while True:
            v = self.next_u64()
            if v <= limit:
                return v % bound

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class LabeledDataset:
    features: np.ndarray     # (n_samples, n_features) float64
    labels: np.ndarray       # (n_samples,) int, classes 0..C-1
    sample_ids: tuple[str, ...] = ()

    def __post_init__(self):
        x, y = self.features, self.labels
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
            raise GraphInputError(f"inconsistent shapes {x.shape} / {y.shape}")
        if not np.all(np.isfinite(x)):
            raise GraphInputError("features contain non-finite values")

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0


@dataclass(frozen=True)
class LogRegModel:
    weights: np.ndarray        # (C, D)
    intercepts: np.ndarray     # (C,)
    feature_mean: np.ndarray   # (D,)
    feature_scale: np.ndarray  # (D,), 1.0 where the training column was constant
    lam: float

    def decision_scores(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.weights.shape[1]:
            raise GraphInputError(
                f"expected (n, {self.weights.shape[1]}) features, got {x.shape}"
            )
        z = (x - self.feature_mean) / self.feature_scale
        return z @ self.weights.T + self.intercepts

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Argmax class; ties resolve to the smallest class id."""
        return np.argmax(self.decision_scores(features), axis=1)

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        s = self.decision_scores(features)
        s -= s.max(axis=1, keepdims=True)
        e = np.exp(s)
        return e / e.sum(axis=1, keepdims=True)


def fit_logreg(
    dataset: LabeledDataset, lam: float = 1.0, tolerance: float = 1e-6
) -> LogRegModel:
    """Fit to gradient max-norm <= tolerance.

    Requires at least 2 classes, each class present in the training data.
    """
    x = np.asarray(dataset.features, dtype=np.float64)
    y = np.asarray(dataset.labels)
    n, d = x.shape
    if n == 0:
        raise DegenerateInputError("empty training set")
    classes = np.unique(y)
    c = int(classes.max()) + 1
    if len(classes) < 2:
        raise DegenerateInputError(f"C >= 2 required, got classes {classes.tolist()}")
    if lam < 0 or not np.isfinite(lam):
        raise GraphInputError(f"lam must be non-negative finite, got {lam}")

    mean = x.mean(axis=0)
    std = x.std(axis=0)
    scale = np.where(std == 0.0, 1.0, std)
    z = (x - mean) / scale
    onehot = np.zeros((n, c))
    onehot[np.arange(n), y] = 1.0

    def objective(params: np.ndarray) -> tuple[float, np.ndarray]:
        w = params[: c * d].reshape(c, d)
        b = params[c * d :]
        scores = z @ w.T + b
        shifted = scores - scores.max(axis=1, keepdims=True)
        exp = np.exp(shifted)
        denom = exp.sum(axis=1, keepdims=True)
        log_probs = shifted - np.log(denom)
        loss = -log_probs[np.arange(n), y].mean() + 0.5 * lam * float((w * w).sum())
        p = exp / denom
        gw = (p - onehot).T @ z / n + lam * w
        gb = (p - onehot).mean(axis=0)
        return loss, np.concatenate([gw.ravel(), gb])

    x0 = np.zeros(c * d + c)
    result = minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={"gtol": tolerance, "ftol": 0.0, "maxiter": 5000, "maxfun": 20000},
    )
    grad_norm = float(np.max(np.abs(result.jac)))
    if grad_norm > tolerance:
        # one restart from the current point with a tighter line search budget
        result = minimize(
            objective,
            result.x,
            jac=True,
            method="L-BFGS-B",
            options={"gtol": tolerance, "ftol": 0.0, "maxiter": 20000, "maxfun": 50000},
        )
        grad_norm = float(np.max(np.abs(result.jac)))
    if grad_norm > 10 * tolerance:
        raise FitError(f"optimizer stalled at gradient norm {grad_norm:.3g}")
    w = result.x[: c * d].reshape(c, d)
    b = result.x[c * d :]
    return LogRegModel(w, b, mean, scale, lam)


# -- cross-validation --------------------------------------------------------


def stratified_folds(labels: np.ndarray, k: int, seed: int, allow_small: bool = False) -> np.ndarray:
    """Fold id per sample; per-class counts across folds differ by <= 1.

    Each class is shuffled with splitmix64(seed mixed with the class id)
    and dealt round-robin starting at a class-dependent offset.  Classes
    with fewer than k members are rejected unless ``allow_small``.
    """
    labels = np.asarray(labels)
    n = labels.shape[0]
    if k < 2:
        raise GraphInputError(f"need k >= 2 folds, got {k}")
    if k > n:
        raise GraphInputError(f"k={k} folds exceed {n} samples")
    fold_of = np.full(n, -1, dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls).tolist()
        if len(idx) < k and not allow_small:
            raise DegenerateInputError(
                f"class {cls} has {len(idx)} samples, fewer than {k} folds "
                "(pass allow_small to deal them anyway)"
            )
        if len(idx) < k:
            warnings.warn(
                f"class {cls} has fewer samples ({len(idx)}) than folds ({k}); "
                "some folds will miss it",
                stacklevel=2,
            )
        rng = SplitMix64((seed << 16) ^ (int(cls) + 1))
        rng.shuffle(idx)
        start = rng.below(k)
        for t, sample in enumerate(idx):
            fold_of[sample] = (start + t) % k
    return fold_of


@dataclass(frozen=True)
class FoldResult:
    index: int
    size: int
    error: float


@dataclass(frozen=True)
class CVReport:
    dataset: str
    measure: str
    classifier: str
    seed: int
    lam: float | None
    folds: tuple[FoldResult, ...]
    mean_error: float

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "measure": self.measure,
            "classifier": self.classifier,
            "seed": self.seed,
            "lambda": self.lam,
            "folds": [
                {"index": f.index, "size": f.size, "error": f.error} for f in self.folds
            ],
            "mean_error": self.mean_error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def summarize_folds(fold_results: list[FoldResult]) -> float:
    """Mean error weighted by fold size (== pooled error over all samples)."""
    total = sum(f.size for f in fold_results)
    if total == 0:
        raise DegenerateInputError("no evaluation samples")
    return sum(f.error * f.size for f in fold_results) / total


def cross_validate(
    dataset: LabeledDataset,
    k: int = 5,
    lam: float = 1.0,
    seed: int = 0,
    tolerance: float = 1e-6,
    dataset_name: str = "",
    measure_name: str = "",
    allow_small: bool = False,
) -> CVReport:
    """Stratified k-fold CV; per-fold models never see held-out rows,
    including in the standardization statistics."""
    labels = dataset.labels
    if len(np.unique(labels)) < 2:
        raise DegenerateInputError("C >= 2 required for cross-validation")
    fold_of = stratified_folds(labels, k, seed, allow_small=allow_small)
    results = []
    for fold in range(k):
        test = fold_of == fold
        train = ~test
        model = fit_logreg(
            LabeledDataset(dataset.features[train], labels[train]), lam, tolerance
        )
        predictions = model.predict(dataset.features[test])
        n_test = int(test.sum())
        wrong = int((predictions != labels[test]).sum())
        results.append(FoldResult(fold, n_test, wrong / n_test))
    return CVReport(
        dataset=dataset_name,
        measure=measure_name,
        classifier="logreg",
        seed=seed,
        lam=lam,
        folds=tuple(results),
        mean_error=summarize_folds(results),
    )
