from .targets import teacher_soft_targets, save_soft_target_cache, load_soft_target_cache
from .weights import class_weight_vector, perturb_weight_set, WeightVector, PerturbedWeightSet
from .train import (
    DistillationRun,
    RKDStepReport,
    surrogate_kd_loss,
    rkd_train_step,
    run_distillation,
)
from .evaluate import evaluate_accuracy

__all__ = [
    "teacher_soft_targets",
    "save_soft_target_cache",
    "load_soft_target_cache",
    "class_weight_vector",
    "perturb_weight_set",
    "WeightVector",
    "PerturbedWeightSet",
    "DistillationRun",
    "RKDStepReport",
    "surrogate_kd_loss",
    "rkd_train_step",
    "run_distillation",
    "evaluate_accuracy",
]
