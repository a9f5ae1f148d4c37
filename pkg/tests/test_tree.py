import numpy as np
import orjson
import pytest

from src.errors import ParseError, ValidationError
from src.tree import (
    DecisionTree,
    Leaf,
    Split,
    accuracy,
    bare_leaf_tree,
    deserialize,
    list_internal_nodes,
    list_subtree_roots,
    predict,
    predict_many,
    replace_subtree,
    serialize,
    subtree_at,
    swap_subtrees,
    tree_to_dict,
)

LEFT = Leaf((0.9, 0.1))
RIGHT = Leaf((0.2, 0.8))


def stump(threshold=5.0) -> DecisionTree:
    return DecisionTree(root=Split(0, threshold, LEFT, RIGHT), n_features=1, n_classes=2)


def test_bare_leaf_predicts_its_argmax():
    tree = bare_leaf_tree((0.2, 0.8), n_features=3)
    assert predict(tree, [0.0, 1.0, 2.0]) == 1
    assert tree.node_count == 1


def test_threshold_routing():
    tree = stump()
    assert predict(tree, [4.0]) == 0
    assert predict(tree, [5.0]) == 0
    assert predict(tree, [6.0]) == 1
    assert list(predict_many(tree, np.array([[4.0], [5.0], [6.0]]))) == [0, 0, 1]


def test_tie_breaks_toward_lowest_class():
    assert predict(bare_leaf_tree((0.5, 0.5), 1), [0.0]) == 0


def test_row_length_mismatch():
    with pytest.raises(ValidationError):
        predict(stump(), [1.0, 2.0])


def test_node_count():
    assert stump().node_count == 3


def test_invalid_trees_are_rejected():
    with pytest.raises(ValidationError):
        Leaf((0.6, 0.6))
    with pytest.raises(ValidationError):
        DecisionTree(root=Split(2, 1.0, LEFT, RIGHT), n_features=2, n_classes=2)
    with pytest.raises(ValidationError):
        DecisionTree(root=Split(0, float("nan"), LEFT, RIGHT), n_features=1, n_classes=2)
    with pytest.raises(ValidationError):
        DecisionTree(root=Leaf((0.2, 0.3, 0.5)), n_features=1, n_classes=2)


def test_accuracy_of_majority_tree(dataset_factory):
    labels = np.array([0] * 651 + [1] * 349)
    ds = dataset_factory(np.zeros((1000, 1)), labels)
    tree = bare_leaf_tree((0.651, 0.349), 1)
    assert accuracy(tree, ds, np.arange(1000)) == pytest.approx(0.651)
    with pytest.raises(ValidationError):
        accuracy(tree, ds, [])


def test_accuracy_of_constant_tree_on_random_labels(dataset_factory):
    rng = np.random.default_rng(11)
    ds = dataset_factory(np.zeros((1000, 1)), rng.permutation(np.repeat([0, 1], 500)))
    assert accuracy(bare_leaf_tree((0.4, 0.6), 1), ds, np.arange(1000)) == pytest.approx(0.5, abs=0.05)


def test_replace_root_with_leaf():
    tree = stump()
    (root, *_) = list_subtree_roots(tree)
    assert replace_subtree(tree, root, Leaf((1.0, 0.0))).node_count == 1
    # 原树不变
    assert tree.node_count == 3


def test_replace_leaf_with_subtree():
    tree = stump()
    leaf = list_subtree_roots(tree)[1]
    grown = replace_subtree(tree, leaf, Split(0, 2.0, LEFT, RIGHT))
    assert grown.node_count == tree.node_count + 2
    assert predict(grown, [1.0]) == 0
    assert predict(grown, [3.0]) == 1


def test_list_internal_nodes():
    assert list_internal_nodes(bare_leaf_tree((0.5, 0.5), 1)) == []
    assert [h.path for h in list_internal_nodes(stump())] == [()]
    assert [h.path for h in list_subtree_roots(stump())] == [(), (0,), (1,)]


def test_stale_handle():
    tree = stump()
    handle = list_subtree_roots(tree)[1]
    edited = replace_subtree(tree, handle, Leaf((0.5, 0.5)))
    with pytest.raises(ValidationError):
        subtree_at(edited, handle)


def test_swap_subtrees():
    tree = stump()
    _, left, right = list_subtree_roots(tree)
    swapped = swap_subtrees(tree, left, right)
    assert swapped.root == Split(0, 5.0, RIGHT, LEFT)
    assert swapped.node_count == tree.node_count


def test_swap_nested_subtrees():
    tree = stump()
    root, left, _ = list_subtree_roots(tree)
    with pytest.raises(ValidationError):
        swap_subtrees(tree, root, left)


def test_serialization_round_trip(tree_factory):
    rng = np.random.default_rng(0)
    for _ in range(20):
        tree = tree_factory(rng, k=3, depth=4)
        assert deserialize(serialize(tree)) == tree


def test_tampered_threshold():
    doc = tree_to_dict(stump())
    doc["root"]["threshold"] = "five"
    with pytest.raises(ParseError):
        deserialize(orjson.dumps(doc).decode())


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"format": 2, "n_features": 1, "n_classes": 2, "root": {"distribution": [0.5, 0.5]}}',
        '{"format": 1, "n_features": 1, "n_classes": 2}',
        '{"format": 1, "n_features": 1, "n_classes": 2, "root": {"distribution": [0.7, 0.7]}}',
        '{"format": 1, "n_features": 1, "n_classes": 2, "root": {"feature": 0, "threshold": 1.0}}',
    ],
)
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        deserialize(text)
