"""From-scratch multi-class soft-margin SVM: SMO training, RBF kernel,
one-vs-one pairing, calibrated probabilities, grid-search cross-validation."""

from .gridsearch import DEFAULT_C_GRID, DEFAULT_FOLDS, DEFAULT_GAMMA_GRID, CvReport, grid_search_cv
from .kernel import rbf_kernel, rbf_matrix
from .multiclass import (
    LabeledDataset,
    PairMachine,
    SvmModel,
    class_pairs,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_proba,
    predict_proba_batch,
    save_model,
    train_multiclass,
)
from .platt import platt_fit, platt_predict
from .smo import BinarySvm, smo_train

__all__ = [
    "BinarySvm",
    "CvReport",
    "DEFAULT_C_GRID",
    "DEFAULT_FOLDS",
    "DEFAULT_GAMMA_GRID",
    "LabeledDataset",
    "PairMachine",
    "SvmModel",
    "class_pairs",
    "grid_search_cv",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "platt_fit",
    "platt_predict",
    "predict_proba",
    "predict_proba_batch",
    "rbf_kernel",
    "rbf_matrix",
    "save_model",
    "smo_train",
    "train_multiclass",
]
