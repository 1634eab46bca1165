"""Stratified k-fold grid search over (C, gamma).

Fold predictions use pairwise voting (ties to the smaller class id), the
standard way to cross-validate a one-vs-one SVM; calibration is fitted only
for the final model, not per grid point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .multiclass import LabeledDataset, _stratified_folds, class_pairs
from .smo import smo_train

DEFAULT_C_GRID = tuple(2.0**e for e in range(-5, 16, 2))
DEFAULT_GAMMA_GRID = tuple(2.0**e for e in range(-15, 4, 2))
DEFAULT_FOLDS = 5


@dataclass(frozen=True)
class CvReport:
    grid: tuple[dict, ...]  # {"C", "gamma", "mean_accuracy"} per point
    best: tuple[float, float]  # (C, gamma)
    folds: int


def _vote_predict(machines, X: np.ndarray, k: int) -> np.ndarray:
    votes = np.zeros((len(X), k))
    for a, b, svm in machines:
        d = svm.decision(X)
        votes[np.arange(len(X)), np.where(d > 0, a, b)] += 1
    return np.argmax(votes, axis=1)  # argmax takes the smaller id on ties


def _fold_accuracy(
    train_X, train_y, test_X, test_y, k: int, C: float, gamma: float
) -> float:
    machines = []
    for a, b in class_pairs(k):
        sel = (train_y == a) | (train_y == b)
        y = np.where(train_y[sel] == a, 1.0, -1.0)
        machines.append((a, b, smo_train(train_X[sel], y, C, gamma)))
    pred = _vote_predict(machines, test_X, k)
    return float((pred == test_y).mean())


def grid_search_cv(
    data: LabeledDataset,
    c_grid=DEFAULT_C_GRID,
    gamma_grid=DEFAULT_GAMMA_GRID,
    k: int = DEFAULT_FOLDS,
    seed: int = 42,
) -> CvReport:
    """Mean validation accuracy per grid point; best by accuracy with ties
    broken towards smaller C, then smaller gamma."""
    if k < 2:
        raise ValueError("need at least 2 folds")
    counts = np.bincount(data.labels, minlength=data.n_classes)
    if counts.min() < k:
        raise ValueError(f"every class needs at least {k} samples for {k}-fold CV")
    fold_of = _stratified_folds(data.labels, k, seed)

    entries = []
    for C in c_grid:
        for gamma in gamma_grid:
            accs = []
            for f in range(k):
                hold = fold_of == f
                accs.append(
                    _fold_accuracy(
                        data.vectors[~hold],
                        data.labels[~hold],
                        data.vectors[hold],
                        data.labels[hold],
                        data.n_classes,
                        C,
                        gamma,
                    )
                )
            entries.append({"C": float(C), "gamma": float(gamma), "mean_accuracy": float(np.mean(accs))})
    best = max(entries, key=lambda e: (e["mean_accuracy"], -e["C"], -e["gamma"]))
    return CvReport(grid=tuple(entries), best=(best["C"], best["gamma"]), folds=k)
