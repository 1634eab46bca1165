"""Qualitative check: the full feature set is at least as good as narrow
subsets on the archetype benchmark (the subset switch exists for exactly this
kind of comparison)."""
import numpy as np

from leafdx.features import apply_scaling, feature_subset_indices, fit_scaling
from leafdx.svm import LabeledDataset, grid_search_cv
from leafdx.synthetic import ARCHETYPES, training_features


def test_full_set_dominates_subsets():
    rng = np.random.default_rng(1717)
    X, y = training_features(rng, per_class=30)
    names = tuple(a.name for a in ARCHETYPES)

    def cv_acc(cols):
        sub = X[:, cols]
        s = fit_scaling(sub)
        data = LabeledDataset(vectors=apply_scaling(sub, s), labels=y, class_names=names)
        r = grid_search_cv(data, c_grid=[32.0], gamma_grid=[0.05], k=3)
        return r.grid[0]["mean_accuracy"]

    full = cv_acc(np.arange(124))
    subsets = [
        feature_subset_indices(colour_channels=("R", "G", "B"), stats=("contrast",)),
        feature_subset_indices(colour_channels=("R", "G", "B"), stats=("correlation",)),
        feature_subset_indices(colour_channels=()),  # textures only
    ]
    for cols in subsets:
        assert full >= cv_acc(cols) - 1e-12
