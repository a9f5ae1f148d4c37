from .base_algorithm import (
    ALGORITHMS,
    AlgorithmKind,
    AlgorithmSpec,
    BaseAlgorithm,
    CommitteeModel,
    MajorityModel,
    TreeModel,
    create_algorithm,
)
from .presets import DEFAULT_ALGORITHMS, default_algorithms

__all__ = [
    "ALGORITHMS",
    "AlgorithmKind",
    "AlgorithmSpec",
    "BaseAlgorithm",
    "CommitteeModel",
    "DEFAULT_ALGORITHMS",
    "MajorityModel",
    "TreeModel",
    "create_algorithm",
    "default_algorithms",
]
