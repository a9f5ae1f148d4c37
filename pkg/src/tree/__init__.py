from .decision_tree import (
    DecisionTree,
    Leaf,
    Node,
    NodeHandle,
    Split,
    accuracy,
    bare_leaf_tree,
    is_ancestor,
    list_internal_nodes,
    list_subtree_roots,
    make_leaf,
    node_count,
    predict,
    predict_many,
    predict_proba,
    replace_subtree,
    subtree_at,
    swap_subtrees,
)
from .serialization import deserialize, serialize, tree_from_dict, tree_to_dict

__all__ = [
    "DecisionTree",
    "Leaf",
    "Node",
    "NodeHandle",
    "Split",
    "accuracy",
    "bare_leaf_tree",
    "deserialize",
    "is_ancestor",
    "list_internal_nodes",
    "list_subtree_roots",
    "make_leaf",
    "node_count",
    "predict",
    "predict_many",
    "predict_proba",
    "replace_subtree",
    "serialize",
    "subtree_at",
    "swap_subtrees",
    "tree_from_dict",
    "tree_to_dict",
]
