from .config import Criterion, EnsembleConfig, InduceConfig
from .ensemble import adaboost, bag, boost, build_population_pool
from .inducer import entropy, find_best_split, gini, impurity, induce_tree

__all__ = [
    "Criterion",
    "EnsembleConfig",
    "InduceConfig",
    "adaboost",
    "bag",
    "boost",
    "build_population_pool",
    "entropy",
    "find_best_split",
    "gini",
    "impurity",
    "induce_tree",
]
