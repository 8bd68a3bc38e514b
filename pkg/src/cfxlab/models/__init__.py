"""Exact model families over binary inputs."""

from .base import BinaryInstance, Delta, Model, apply_delta, as_delta, as_instance
from .diagrams import DecisionList, DecisionTree, Fbdd
from .ensemble import Ensemble, flatten_ensemble, pad_network
from .io import dumps_model, load_model, loads_model, model_from_dict, model_to_dict
from .knn import KnnRegressor
from .linear import Perceptron, ReluNetwork
from .trees import AdditiveTreeModel


def evaluate(model, x):
    """Exact output of ``model`` on the binary instance ``x``."""
    return model.evaluate(x)


def validate(model):
    """List every violated structural invariant; empty iff well-formed."""
    return list(model.problems())


__all__ = [
    "AdditiveTreeModel",
    "BinaryInstance",
    "DecisionList",
    "DecisionTree",
    "Delta",
    "Ensemble",
    "Fbdd",
    "KnnRegressor",
    "Model",
    "Perceptron",
    "ReluNetwork",
    "apply_delta",
    "as_delta",
    "as_instance",
    "dumps_model",
    "evaluate",
    "flatten_ensemble",
    "load_model",
    "loads_model",
    "model_from_dict",
    "model_to_dict",
    "pad_network",
    "validate",
]
