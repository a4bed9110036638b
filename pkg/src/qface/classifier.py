"""Average-face template matching with fidelity thresholding.

The template is the componentwise mean of the raw training vectors,
normalized once after averaging. A sample whose fidelity against the
template strictly exceeds the threshold is predicted as a face; equality
classifies as non-face (the threshold rule is a strict inequality).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from . import encoding, swaptest
from .validation import (
    FACE,
    NONFACE,
    check_label,
    check_matrix,
    check_power_of_two,
    check_unit_vector,
)


@dataclass(frozen=True)
class Template:
    """Normalized average-face vector compared against every test state."""

    vector: np.ndarray
    source_count: int

    def __post_init__(self):
        object.__setattr__(self, "vector", check_unit_vector(self.vector, "template", atol=1e-10))
        if self.source_count < 1:
            raise ValueError("source_count must be >= 1")

    @property
    def dim(self) -> int:
        return self.vector.size


@dataclass(frozen=True)
class LabeledSample:
    """A unit test vector with its ground-truth label and stable id."""

    vector: np.ndarray
    label: str
    id: str

    def __post_init__(self):
        object.__setattr__(self, "vector", check_unit_vector(self.vector, "sample"))
        check_label(self.label)


@dataclass(frozen=True)
class ClassificationResult:
    id: str
    fidelity: float
    threshold: float
    predicted: str

    def __post_init__(self):
        expected = FACE if self.fidelity > self.threshold else NONFACE
        if self.predicted != expected:
            raise ValueError("predicted label contradicts the threshold rule")


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float


@dataclass
class SweepReport:
    """Per-threshold confusion counts; rows ascend by threshold."""

    rows: list[SweepRow]
    best_threshold: float
    best_accuracy: float
    fidelities: dict[str, float] = field(default_factory=dict, repr=False)

    def to_csv(self) -> str:
        lines = ["threshold,tp,fp,tn,fn,accuracy"]
        for r in self.rows:
            lines.append(
                f"{r.threshold:.6f},{r.tp},{r.fp},{r.tn},{r.fn},{r.accuracy:.6f}"
            )
        return "\n".join(lines) + "\n"


def build_template(train) -> Template:
    """Componentwise mean of raw training vectors, normalized once."""
    try:
        X = check_matrix(train, "train")
    except ValueError as exc:
        raise ValueError(f"training vectors are unusable: {exc}") from exc
    check_power_of_two(X.shape[1], "training dimension")
    mean = X.mean(axis=0)
    try:
        unit = encoding.normalize(mean)
    except ValueError as exc:
        raise ValueError("training vectors average to a zero vector") from exc
    return Template(vector=unit, source_count=X.shape[0])


def predict_label(fidelity: float, threshold: float) -> str:
    """Strict inequality: fidelity above the threshold means face."""
    return FACE if fidelity > threshold else NONFACE


def classify(
    template: Template,
    sample: LabeledSample,
    threshold: float,
    mode: str = swaptest.CIRCUIT_EXACT,
    shots: int = swaptest.DEFAULT_SHOTS,
    seed=None,
) -> ClassificationResult:
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    if sample.vector.size != template.dim:
        raise ValueError(
            f"dimension mismatch: sample {sample.vector.size} vs template {template.dim}"
        )
    est = swaptest.estimate_fidelity(
        template.vector, sample.vector, mode=mode, shots=shots, seed=seed
    )
    return ClassificationResult(
        id=sample.id,
        fidelity=est.value,
        threshold=threshold,
        predicted=predict_label(est.value, threshold),
    )


def compute_fidelities(
    template: Template,
    testset,
    mode: str = swaptest.CIRCUIT_EXACT,
    shots: int = swaptest.DEFAULT_SHOTS,
    seed=None,
) -> list[tuple[LabeledSample, float]]:
    """One fidelity per sample, ordered by sample id.

    Per-sample seeds are derived from (seed, rank) so sampled-mode results do
    not depend on evaluation order.
    """
    ordered = sorted(testset, key=lambda s: s.id)
    out = []
    for i, sample in enumerate(ordered):
        est = swaptest.estimate_fidelity(
            template.vector,
            sample.vector,
            mode=mode,
            shots=shots,
            seed=swaptest.derive_seed(seed, i),
        )
        out.append((sample, est.value))
    return out


def threshold_grid(start: float, step: float, end: float) -> list[float]:
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    if not start < end:
        raise ValueError(f"need start < end, got {start} >= {end}")
    if start < 0 or end > 1:
        raise ValueError("thresholds must lie in [0, 1]")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def sweep_thresholds(
    template: Template,
    testset,
    start: float = 0.70,
    step: float = 0.01,
    end: float = 1.00,
    mode: str = swaptest.CIRCUIT_EXACT,
    shots: int = swaptest.DEFAULT_SHOTS,
    seed=None,
) -> SweepReport:
    """Evaluate every threshold in [start, end] over one shared fidelity pass.

    Fidelities are computed once per sample; each row is pure re-thresholding.
    The best row has maximal accuracy, ties broken toward the lowest threshold.
    """
    testset = list(testset)
    if not testset:
        raise ValueError("testset is empty")
    scored = compute_fidelities(template, testset, mode=mode, shots=shots, seed=seed)
    fids = np.array([f for _, f in scored])
    is_face = np.array([s.label == FACE for s, _ in scored])
    total = len(scored)

    rows = []
    for thr in threshold_grid(start, step, end):
        predicted_face = fids > thr
        tp = int(np.sum(predicted_face & is_face))
        fp = int(np.sum(predicted_face & ~is_face))
        tn = int(np.sum(~predicted_face & ~is_face))
        fn = int(np.sum(~predicted_face & is_face))
        rows.append(SweepRow(thr, tp, fp, tn, fn, (tp + tn) / total))

    best = max(rows, key=lambda r: r.accuracy)  # max keeps the earliest on ties
    return SweepReport(
        rows=rows,
        best_threshold=best.threshold,
        best_accuracy=best.accuracy,
        fidelities={s.id: f for s, f in scored},
    )


def average_fidelity_report(
    template: Template,
    testset,
    mode: str = swaptest.CIRCUIT_EXACT,
    shots: int = swaptest.DEFAULT_SHOTS,
    seed=None,
) -> tuple[float, float]:
    """Mean fidelity per true label: (mean over faces, mean over non-faces)."""
    scored = compute_fidelities(template, testset, mode=mode, shots=shots, seed=seed)
    face = [f for s, f in scored if s.label == FACE]
    nonface = [f for s, f in scored if s.label == NONFACE]
    if not face or not nonface:
        raise ValueError("testset must contain at least one sample of each label")
    return float(np.mean(face)), float(np.mean(nonface))


class SwapTestClassifier(BaseEstimator, ClassifierMixin):
    """Face/non-face classifier: fidelity against an averaged template.

    fit() consumes raw (unnormalized) face vectors only; predict() normalizes
    its inputs and applies the strict threshold rule. decision_function()
    exposes the fidelities themselves.

    Parameters
    ----------
    threshold : float, decision boundary on fidelity.
    mode : "circuit_exact", "analytic" or "sampled".
    shots : measurement count for sampled mode (ignored otherwise).
    seed : base seed for sampled mode; per-sample seeds are derived from it.
    """

    def __init__(self, threshold=0.958, mode=swaptest.CIRCUIT_EXACT,
                 shots=swaptest.DEFAULT_SHOTS, seed=None):
        self.threshold = threshold
        self.mode = mode
        self.shots = shots
        self.seed = seed

    def fit(self, X, y=None):
        """Build the template from raw face vectors; y is ignored."""
        self.template_ = build_template(X)
        self.classes_ = np.array([FACE, NONFACE])
        return self

    def _check_fitted(self):
        if not hasattr(self, "template_"):
            raise NotFittedError("SwapTestClassifier must be fitted before use")

    def decision_function(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_matrix(X)
        if X.shape[1] != self.template_.dim:
            raise ValueError(
                f"dimension mismatch: X has {X.shape[1]} features, "
                f"template has {self.template_.dim}"
            )
        fids = np.empty(X.shape[0])
        for i, row in enumerate(X):
            fids[i] = swaptest.estimate_fidelity(
                self.template_.vector,
                encoding.normalize(row),
                mode=self.mode,
                shots=self.shots,
                seed=swaptest.derive_seed(self.seed, i),
            ).value
        return fids

    def predict(self, X) -> np.ndarray:
        fids = self.decision_function(X)
        return np.where(fids > self.threshold, FACE, NONFACE)
