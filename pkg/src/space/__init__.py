from .merge import merge_regions, naive_merge
from .reconstruct import Reconstruction, find_candidate_splits, reconstruct, regions_to_tree
from .regions import Region, RegionSet, tree_to_regions

__all__ = [
    "Reconstruction",
    "Region",
    "RegionSet",
    "find_candidate_splits",
    "merge_regions",
    "naive_merge",
    "reconstruct",
    "regions_to_tree",
    "tree_to_regions",
]
