"""Shared expensive fixtures: a small trained model over the archetype set."""
from __future__ import annotations

import numpy as np

_MODEL_CACHE = {}


def small_model(per_class: int = 25, C: float = 32.0, gamma: float = 0.05):
    """Train (once) a compact archetype model plus its matching catalog."""
    key = (per_class, C, gamma)
    if key not in _MODEL_CACHE:
        from leafdx.catalog import default_catalog
        from leafdx.features import apply_scaling, fit_scaling
        from leafdx.svm import LabeledDataset, train_multiclass
        from leafdx.synthetic import ARCHETYPES, training_features

        rng = np.random.default_rng(20240817)
        X, y = training_features(rng, per_class=per_class)
        scaling = fit_scaling(X)
        data = LabeledDataset(
            vectors=apply_scaling(X, scaling),
            labels=y,
            class_names=tuple(a.name for a in ARCHETYPES),
        )
        model = train_multiclass(data, C=C, gamma=gamma, scaling=scaling)
        _MODEL_CACHE[key] = (model, default_catalog())
    return _MODEL_CACHE[key]
