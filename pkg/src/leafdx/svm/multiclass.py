"""One-vs-one multiclass SVM with calibrated pairwise probabilities.

Each unordered class pair gets its own binary machine.  Calibration decision
values come from an internal stratified cross-fit so the sigmoid never sees
the values of the machine it calibrates.  Class probabilities are the
normalised row sums of the pairwise win probabilities.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import MalformedFileError, VersionMismatchError
from ..features import FEATURE_LAYOUT_VERSION, ScalingParams, apply_scaling
from .platt import platt_fit, platt_predict
from .smo import BinarySvm, smo_train

MODEL_FORMAT = "leafdx-svm-model"
MODEL_VERSION = 1
PLATT_FOLDS = 5
DEFAULT_SEED = 42


@dataclass(frozen=True)
class LabeledDataset:
    vectors: np.ndarray  # (n, d), already scaled
    labels: np.ndarray  # (n,) ints in [0, K)
    class_names: tuple[str, ...]

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        l = np.asarray(self.labels, dtype=np.int64)
        k = len(self.class_names)
        if v.ndim != 2 or len(v) != len(l):
            raise ValueError("vectors and labels disagree")
        if k < 2 or len(v) < k:
            raise ValueError("need at least two classes with samples")
        counts = np.bincount(l, minlength=k)
        if l.min() < 0 or l.max() >= k:
            raise ValueError("labels must index class_names")
        if counts.min() < 2:
            raise ValueError("every class needs at least two samples")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "labels", l)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


@dataclass(frozen=True)
class PairMachine:
    class_a: int  # the +1 side of the decision
    class_b: int
    svm: BinarySvm
    platt_a: float
    platt_b: float

    def win_probability(self, X: np.ndarray) -> np.ndarray:
        """P(class_a | x) within this pair."""
        return platt_predict(self.svm.decision(X), self.platt_a, self.platt_b)


@dataclass(frozen=True)
class SvmModel:
    class_names: tuple[str, ...]
    machines: tuple[PairMachine, ...]
    scaling: ScalingParams
    feature_layout: str
    C: float
    gamma: float

    def __post_init__(self):
        k = len(self.class_names)
        if len(self.machines) != k * (k - 1) // 2:
            raise ValueError("machine count must be K(K-1)/2")

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


def _stratified_folds(labels: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Fold id per sample: a seeded shuffle within each class dealt
    round-robin, so every fold sees every class."""
    rng = np.random.default_rng(seed)
    folds = np.zeros(len(labels), dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.nonzero(labels == cls)[0]
        idx = idx[rng.permutation(len(idx))]
        folds[idx] = np.arange(len(idx)) % k
    return folds


def _cross_fit_decisions(
    X: np.ndarray, y: np.ndarray, C: float, gamma: float, folds: int, seed: int
) -> np.ndarray:
    """Out-of-fold decision values for calibration."""
    labels01 = (y > 0).astype(np.int64)
    n_folds = min(folds, int(np.bincount(labels01).min()))
    if n_folds < 2:
        machine = smo_train(X, y, C, gamma)
        return machine.decision(X)
    fold_of = _stratified_folds(labels01, n_folds, seed)
    out = np.zeros(len(y))
    for f in range(n_folds):
        hold = fold_of == f
        machine = smo_train(X[~hold], y[~hold], C, gamma)
        out[hold] = machine.decision(X[hold])
    return out


def class_pairs(k: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(k) for b in range(a + 1, k)]


def train_multiclass(
    data: LabeledDataset,
    C: float,
    gamma: float,
    scaling: ScalingParams,
    seed: int = DEFAULT_SEED,
) -> SvmModel:
    """One machine per class pair plus its cross-fit Platt calibration.

    ``data.vectors`` must already be scaled with ``scaling``; the params ride
    along in the model so prediction can scale raw vectors itself.
    """
    machines = []
    for a, b in class_pairs(data.n_classes):
        sel = (data.labels == a) | (data.labels == b)
        X = data.vectors[sel]
        y = np.where(data.labels[sel] == a, 1.0, -1.0)
        decisions = _cross_fit_decisions(X, y, C, gamma, PLATT_FOLDS, seed)
        A, B = platt_fit(decisions, y)
        machines.append(
            PairMachine(class_a=a, class_b=b, svm=smo_train(X, y, C, gamma), platt_a=A, platt_b=B)
        )
    return SvmModel(
        class_names=tuple(data.class_names),
        machines=tuple(machines),
        scaling=scaling,
        feature_layout=FEATURE_LAYOUT_VERSION,
        C=float(C),
        gamma=float(gamma),
    )


def predict_proba(model: SvmModel, v: np.ndarray) -> np.ndarray:
    """Class probabilities for one raw (unscaled) feature vector."""
    return predict_proba_batch(model, np.atleast_2d(v))[0]


def predict_proba_batch(model: SvmModel, V: np.ndarray) -> np.ndarray:
    """Row-normalised sums of pairwise win probabilities, one row per input."""
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    if V.shape[1] != model.scaling.dimension:
        raise ValueError(f"expected dimension {model.scaling.dimension}, got {V.shape[1]}")
    X = apply_scaling(V, model.scaling)
    k = model.n_classes
    p = np.zeros((len(X), k))
    for m in model.machines:
        r = m.win_probability(X)
        p[:, m.class_a] += r
        p[:, m.class_b] += 1.0 - r
    return p / p.sum(axis=1, keepdims=True)


# -- serialisation ---------------------------------------------------------


def model_to_dict(model: SvmModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "class_names": list(model.class_names),
        "feature_layout": model.feature_layout,
        "C": model.C,
        "gamma": model.gamma,
        "scaling": {"lo": list(model.scaling.lo), "hi": list(model.scaling.hi)},
        "machines": [
            {
                "class_a": m.class_a,
                "class_b": m.class_b,
                "support_vectors": [list(row) for row in m.svm.support_vectors],
                "dual_coefs": list(m.svm.dual_coefs),
                "bias": m.svm.bias,
                "gamma": m.svm.gamma,
                "C": m.svm.C,
                "platt_a": m.platt_a,
                "platt_b": m.platt_b,
            }
            for m in model.machines
        ],
    }


def model_from_dict(d: dict) -> SvmModel:
    try:
        if d.get("format") != MODEL_FORMAT:
            raise MalformedFileError("not a model file")
        if d.get("version") != MODEL_VERSION:
            raise VersionMismatchError(f"unsupported model version: {d.get('version')!r}")
        if d.get("feature_layout") != FEATURE_LAYOUT_VERSION:
            raise VersionMismatchError(
                f"unsupported feature layout: {d.get('feature_layout')!r}"
            )
        machines = tuple(
            PairMachine(
                class_a=int(m["class_a"]),
                class_b=int(m["class_b"]),
                svm=BinarySvm(
                    support_vectors=np.array(m["support_vectors"], dtype=np.float64).reshape(
                        len(m["dual_coefs"]), -1
                    ),
                    dual_coefs=np.array(m["dual_coefs"], dtype=np.float64),
                    bias=float(m["bias"]),
                    gamma=float(m["gamma"]),
                    C=float(m["C"]),
                ),
                platt_a=float(m["platt_a"]),
                platt_b=float(m["platt_b"]),
            )
            for m in d["machines"]
        )
        return SvmModel(
            class_names=tuple(str(n) for n in d["class_names"]),
            machines=machines,
            scaling=ScalingParams(
                lo=np.array(d["scaling"]["lo"], dtype=np.float64),
                hi=np.array(d["scaling"]["hi"], dtype=np.float64),
            ),
            feature_layout=str(d["feature_layout"]),
            C=float(d["C"]),
            gamma=float(d["gamma"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedFileError(f"bad model file: {e}") from e


def save_model(model: SvmModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), sort_keys=True))


def load_model(path: str | Path) -> SvmModel:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MalformedFileError(f"bad model file: {e}") from e
    return model_from_dict(d)
