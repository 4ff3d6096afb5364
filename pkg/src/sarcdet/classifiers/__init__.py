from .model import (
    LabeledMatrix,
    Scaler,
    TrainedModel,
    apply_scaler,
    fit_scaler,
    sign_to_label,
    label_to_sign,
)
from .linear import (
    fit_lr,
    fit_lsvc,
    hinge_objective_grad,
    lr_objective_grad,
    lr_probability,
    predict_linear,
    sigmoid,
)
from .naive_bayes import fit_gnb, predict_gnb
from .forest import fit_rf, predict_rf
from .model_io import load_model, save_model

__all__ = [
    "LabeledMatrix",
    "Scaler",
    "TrainedModel",
    "apply_scaler",
    "fit_scaler",
    "sign_to_label",
    "label_to_sign",
    "fit_lr",
    "fit_lsvc",
    "hinge_objective_grad",
    "lr_objective_grad",
    "lr_probability",
    "predict_linear",
    "sigmoid",
    "fit_gnb",
    "predict_gnb",
    "fit_rf",
    "predict_rf",
    "load_model",
    "save_model",
]
