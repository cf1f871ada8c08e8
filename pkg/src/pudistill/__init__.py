"""Positive-unlabeled data selection plus robust knowledge distillation.

Two-stage toolkit: a PU classifier over an attention-gated multi-scale
feature extractor picks useful examples out of an unlabeled pool, then a
compact student is distilled from a frozen teacher on the extended dataset
with a class-imbalance-robust minimax loss.
"""

__version__ = "0.1.0"
