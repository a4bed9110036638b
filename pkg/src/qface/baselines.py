"""Classical comparators: k-nearest-neighbor and a Gaussian-kernel SVM.

Both consume the same normalized vectors the quantum path encodes, so
accuracy comparisons isolate the classifier rather than the preprocessing.
The SVM trainer is a simplified SMO; it needs no external solver.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import swaptest
from .classifier import build_template, sweep_thresholds
from .validation import FACE, NONFACE, check_vector

DEFAULT_C = 10.0
DEFAULT_TOL = 1e-4
DEFAULT_MAX_PASSES = 10
DEFAULT_MAX_SWEEPS = 2000
KNN_K_MAX = 20

_SIGN = {FACE: 1, NONFACE: -1}


@dataclass(frozen=True)
class KnnModel:
    """Memorized training set plus the neighbor count."""

    train: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "train", tuple(self.train))
        if not self.train:
            raise ValueError("training set is empty")
        if not 1 <= self.k <= len(self.train):
            raise ValueError(
                f"k must lie in [1, {len(self.train)}], got {self.k}"
            )


def knn_classify(model: KnnModel, query) -> str:
    """Majority label among the k nearest training points.

    Tie rules: equidistant neighbors at the k-boundary admit the lower sample
    id; a tied vote falls back to the label of the single nearest neighbor.
    """
    query = check_vector(query, "query")
    dim = model.train[0].vector.size
    if query.size != dim:
        raise ValueError(
            f"dimension mismatch: query {query.size} vs training {dim}"
        )
    ranked = sorted(
        model.train,
        key=lambda s: (float(np.linalg.norm(s.vector - query)), s.id),
    )
    top = ranked[: model.k]
    face_votes = sum(1 for s in top if s.label == FACE)
    nonface_votes = model.k - face_votes
    if face_votes != nonface_votes:
        return FACE if face_votes > nonface_votes else NONFACE
    return ranked[0].label


@dataclass
class SvmModel:
    """Gaussian-kernel SVM in dual form.

    support_vectors holds (vector, y, alpha) triples with y in {-1, +1} and
    0 < alpha <= c; points whose multiplier collapsed to zero are dropped.
    """

    support_vectors: list
    bias: float
    gamma: float
    c: float
    converged: bool = True

    def __post_init__(self):
        if self.gamma <= 0 or self.c <= 0:
            raise ValueError("gamma and c must be positive")
        for _, y, alpha in self.support_vectors:
            if y not in (-1, 1):
                raise ValueError(f"support-vector label must be -1 or +1, got {y}")
            if not 0 < alpha <= self.c:
                raise ValueError(f"alpha {alpha} outside (0, c={self.c}]")


def rbf_kernel(a, b, gamma: float) -> float:
    d = a - b
    return float(np.exp(-gamma * np.dot(d, d)))


def svm_train(
    train,
    c: float = DEFAULT_C,
    gamma: float | None = None,
    tol: float = DEFAULT_TOL,
    max_passes: int = DEFAULT_MAX_PASSES,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    seed: int = 0,
) -> SvmModel:
    """Simplified SMO over the dual problem.

    Sweeps the training set updating multiplier pairs until no alpha moves by
    more than tol for max_passes consecutive sweeps. Hitting max_sweeps first
    returns the partial model with converged=False and a warning.
    """
    train = list(train)
    labels = {s.label for s in train}
    if len(labels) < 2:
        raise ValueError("svm_train needs both labels present in the training set")
    if c <= 0 or (gamma is not None and gamma <= 0):
        raise ValueError("c and gamma must be positive")

    X = np.array([s.vector for s in train])
    y = np.array([_SIGN[s.label] for s in train], dtype=float)
    n, dim = X.shape
    if gamma is None:
        gamma = 1.0 / dim

    sq = np.sum(X * X, axis=1)
    K = np.exp(-gamma * (sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)))

    alphas = np.zeros(n)
    b = 0.0
    rng = np.random.default_rng(seed)
    passes = 0
    sweeps = 0
    converged = True
    while passes < max_passes:
        if sweeps >= max_sweeps:
            converged = False
            warnings.warn(
                f"SMO did not converge within {max_sweeps} sweeps; "
                "returning the partial model",
                RuntimeWarning,
                stacklevel=2,
            )
            break
        sweeps += 1
        changed = 0
        for i in range(n):
            e_i = float(np.dot(alphas * y, K[:, i])) + b - y[i]
            if not (
                (y[i] * e_i < -tol and alphas[i] < c)
                or (y[i] * e_i > tol and alphas[i] > 0)
            ):
                continue
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            e_j = float(np.dot(alphas * y, K[:, j])) + b - y[j]
            a_i, a_j = alphas[i], alphas[j]
            if y[i] != y[j]:
                lo, hi = max(0.0, a_j - a_i), min(c, c + a_j - a_i)
            else:
                lo, hi = max(0.0, a_i + a_j - c), min(c, a_i + a_j)
            if lo == hi:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0:
                continue
            a_j_new = min(hi, max(lo, a_j - y[j] * (e_i - e_j) / eta))
            if abs(a_j_new - a_j) <= tol:
                continue
            # box-clamp: rounding can push the companion an ulp past c
            a_i_new = min(c, max(0.0, a_i + y[i] * y[j] * (a_j - a_j_new)))
            alphas[i], alphas[j] = a_i_new, a_j_new
            b1 = b - e_i - y[i] * (a_i_new - a_i) * K[i, i] \
                - y[j] * (a_j_new - a_j) * K[i, j]
            b2 = b - e_j - y[i] * (a_i_new - a_i) * K[i, j] \
                - y[j] * (a_j_new - a_j) * K[j, j]
            if 0 < a_i_new < c:
                b = b1
            elif 0 < a_j_new < c:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            changed += 1
        passes = passes + 1 if changed == 0 else 0

    svs = [
        (X[i].copy(), int(y[i]), float(alphas[i]))
        for i in range(n)
        if alphas[i] > 0
    ]
    return SvmModel(support_vectors=svs, bias=b, gamma=gamma, c=c,
                    converged=converged)


def svm_decision(model: SvmModel, query) -> float:
    query = check_vector(query, "query")
    if model.support_vectors:
        dim = model.support_vectors[0][0].size
        if query.size != dim:
            raise ValueError(
                f"dimension mismatch: query {query.size} vs model {dim}"
            )
    total = model.bias
    for vec, y, alpha in model.support_vectors:
        total += alpha * y * rbf_kernel(vec, query, model.gamma)
    return total


def svm_predict(model: SvmModel, query) -> str:
    """Sign of the decision function; zero classifies as non-face."""
    return FACE if svm_decision(model, query) > 0 else NONFACE


@dataclass(frozen=True)
class ComparisonRow:
    algorithm: str
    accuracy: float
    detail: str


@dataclass
class ComparisonReport:
    """Table-style accuracy comparison plus the per-k accuracy curve."""

    rows: list
    knn_per_k: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["algorithm,accuracy,detail"]
        for r in self.rows:
            lines.append(f"{r.algorithm},{r.accuracy:.6f},{r.detail}")
        return "\n".join(lines) + "\n"

    def knn_to_csv(self) -> str:
        lines = ["k,accuracy"]
        for k, acc in self.knn_per_k:
            lines.append(f"{k},{acc:.6f}")
        return "\n".join(lines) + "\n"


def _accuracy(predictions, samples) -> float:
    hits = sum(1 for p, s in zip(predictions, samples) if p == s.label)
    return hits / len(samples)


def compare_algorithms(
    train,
    test,
    mode: str = swaptest.CIRCUIT_EXACT,
    shots: int = swaptest.DEFAULT_SHOTS,
    seed=None,
    threshold_start: float = 0.70,
    threshold_step: float = 0.01,
    threshold_end: float = 1.00,
    knn_k_max: int = KNN_K_MAX,
    svm_c: float = DEFAULT_C,
    svm_gamma: float | None = None,
) -> ComparisonReport:
    """Accuracy of SVM, k-NN (best k in 1..knn_k_max) and the quantum sweep.

    train and test are LabeledSample lists; train must contain both labels
    (the quantum template still uses only its face members). Row order is
    svm, knn, quantum.
    """
    train = list(train)
    test = list(test)
    if not test:
        raise ValueError("test set is empty")
    train_faces = [s for s in train if s.label == FACE]
    if not train_faces:
        raise ValueError("train set has no face samples")

    svm_model = svm_train(train, c=svm_c, gamma=svm_gamma, seed=0)
    svm_acc = _accuracy([svm_predict(svm_model, s.vector) for s in test], test)

    per_k = []
    for k in range(1, min(knn_k_max, len(train)) + 1):
        model = KnnModel(train=train, k=k)
        acc = _accuracy([knn_classify(model, s.vector) for s in test], test)
        per_k.append((k, acc))
    best_k, knn_acc = max(per_k, key=lambda ka: ka[1])  # tie -> lowest k

    template = build_template([s.vector for s in train_faces])
    sweep = sweep_thresholds(
        template, test,
        start=threshold_start, step=threshold_step, end=threshold_end,
        mode=mode, shots=shots, seed=seed,
    )

    rows = [
        ComparisonRow("svm", svm_acc, f"sv={len(svm_model.support_vectors)}"),
        ComparisonRow("knn", knn_acc, f"k={best_k}"),
        ComparisonRow("quantum", sweep.best_accuracy,
                      f"threshold={sweep.best_threshold:.6f}"),
    ]
    return ComparisonReport(rows=rows, knn_per_k=per_k)
