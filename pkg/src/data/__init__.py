from .dataset import Dataset, FeatureKind, FeatureSpec
from .folds import FoldPlan, make_folds, split_half
from .loader import load_csv

__all__ = [
    "Dataset",
    "FeatureKind",
    "FeatureSpec",
    "FoldPlan",
    "load_csv",
    "make_folds",
    "split_half",
]
