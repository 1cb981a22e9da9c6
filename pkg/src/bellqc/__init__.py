"""Dressed single-qubit classifier trained with a Bell-inequality gap cost."""

from .classifier import Label, ModelParams, Prediction, accuracy, embed, forward, predict
from .errors import ContractViolationError, InvalidInputError, NumericError, ParseError
from .training import TrainConfig, TrainPair, make_pairs, pair_cost, total_cost, train

__version__ = "0.1.0"

__all__ = [
    "ContractViolationError",
    "InvalidInputError",
    "Label",
    "ModelParams",
    "NumericError",
    "ParseError",
    "Prediction",
    "TrainConfig",
    "TrainPair",
    "accuracy",
    "embed",
    "forward",
    "make_pairs",
    "pair_cost",
    "predict",
    "total_cost",
    "train",
]
