from .risk import sigmoid_loss, pu_risk, PURiskTerms
from .classifier import MultiScaleAttentionClassifier, build_pu_classifier
from .train import pu_train_step, train_pu_classifier, PUStepReport
from .select import select_positives, extend_dataset, write_index_file, read_index_file

__all__ = [
    "sigmoid_loss",
    "pu_risk",
    "PURiskTerms",
    "MultiScaleAttentionClassifier",
    "build_pu_classifier",
    "pu_train_step",
    "train_pu_classifier",
    "PUStepReport",
    "select_positives",
    "extend_dataset",
    "write_index_file",
    "read_index_file",
]
