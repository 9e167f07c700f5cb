"""Exact inference on support networks."""

from .answers import (
    DiscreteAnswer, GaussianAnswer, MixtureAnswer, MixtureComponent, answer_from_json,
)
from .engine import ENGINES, QueryOptions, answer_network, answer_query, query_network
from .factor import Factor, elimination_order, enumerate_joint, variable_elimination
from .gaussian import GaussianBelief, condition, gaussian_query, joint_moments
from .mixed import mixed_query

__all__ = [
    "DiscreteAnswer", "ENGINES", "Factor", "GaussianAnswer", "GaussianBelief",
    "MixtureAnswer", "MixtureComponent", "QueryOptions", "answer_from_json",
    "answer_network", "answer_query", "condition", "elimination_order",
    "enumerate_joint", "gaussian_query", "joint_moments", "mixed_query",
    "query_network", "variable_elimination",
]
