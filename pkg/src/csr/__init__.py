"""Reconfiguration of constraint satisfaction solutions: oracle, deciders, kernels, reductions."""

from .errors import (
    BudgetExceeded,
    CsrError,
    GenerationFailed,
    InvalidWalk,
    MalformedAssignment,
    MalformedInstance,
    NotBinary,
    NotIdentical,
    WrongAlgorithm,
)
from .model import Constraint, CspInstance, Domain, Hypergraph, ReconfigInstance
from .oracle import (
    build_solution_graph,
    enumerate_solutions,
    is_reconfigurable,
    shortest_reconfiguration,
    shortest_walk,
    validate_walk,
)

__all__ = [
    "BudgetExceeded",
    "Constraint",
    "CsrError",
    "CspInstance",
    "Domain",
    "GenerationFailed",
    "Hypergraph",
    "InvalidWalk",
    "MalformedAssignment",
    "MalformedInstance",
    "NotBinary",
    "NotIdentical",
    "ReconfigInstance",
    "WrongAlgorithm",
    "build_solution_graph",
    "enumerate_solutions",
    "is_reconfigurable",
    "shortest_reconfiguration",
    "shortest_walk",
    "validate_walk",
]
