import numpy as np
import pytest

from src.data import split_half
from src.errors import ConfigError, ValidationError
from src.induce import (
    Criterion,
    EnsembleConfig,
    InduceConfig,
    adaboost,
    bag,
    boost,
    build_population_pool,
    entropy,
    gini,
    impurity,
    induce_tree,
)
from src.tree import Leaf, Split, accuracy, serialize


def test_impurity_closed_forms():
    assert gini(np.array([0.5, 0.5])) == pytest.approx(0.5)
    assert entropy(np.array([0.5, 0.5])) == pytest.approx(1.0)
    assert gini(np.array([1.0, 0.0])) == 0.0
    assert entropy(np.array([1.0, 0.0])) == 0.0


def test_forced_split(dataset_factory):
    xs = np.array([1.0, 2.0, 3.0, 4.0, 7.0, 8.0, 9.0, 10.0])
    ds = dataset_factory(xs.reshape(-1, 1), (xs > 5).astype(int))
    tree = induce_tree(ds, np.arange(8), InduceConfig(min_samples_leaf=1, min_samples_split=2))
    assert tree.node_count == 3
    assert 4.0 < tree.root.threshold < 7.0


def test_pure_input_gives_bare_leaf(dataset_factory):
    ds = dataset_factory(np.arange(10.0).reshape(-1, 1), [0] * 5 + [1] * 5)
    tree = induce_tree(ds, np.arange(5), InduceConfig())
    assert isinstance(tree.root, Leaf)
    assert tree.root.label == 0


def test_iris_training_accuracy(iris):
    indices = np.arange(iris.n_samples)
    for criterion in Criterion:
        tree = induce_tree(iris, indices, InduceConfig(criterion=criterion))
        assert accuracy(tree, iris, indices) >= 0.96


def test_max_depth_is_respected(iris):
    tree = induce_tree(iris, np.arange(150), InduceConfig(max_depth=2))
    assert tree.depth <= 2


def route_rows(node, rows: np.ndarray, members: np.ndarray):
    """按 x <= t 走左的规则把训练样本分配到每个节点, 逐个产出 (节点, 样本索引)"""
    yield node, members
    if isinstance(node, Split):
        go_left = rows[members, node.feature] <= node.threshold
        yield from route_rows(node.left, rows, members[go_left])
        yield from route_rows(node.right, rows, members[~go_left])


@pytest.mark.parametrize("min_samples_leaf", [1, 5, 20])
def test_leaves_hold_min_samples(iris, min_samples_leaf):
    for criterion in Criterion:
        config = InduceConfig(criterion=criterion, min_samples_leaf=min_samples_leaf)
        tree = induce_tree(iris, np.arange(150), config)
        leaves = [m for node, m in route_rows(tree.root, iris.rows, np.arange(150)) if isinstance(node, Leaf)]
        assert sum(m.size for m in leaves) == 150
        assert min(m.size for m in leaves) >= min_samples_leaf


@pytest.mark.parametrize("criterion", list(Criterion))
def test_every_split_reduces_impurity(iris, criterion):
    train = np.arange(0, 150, 2)
    tree = induce_tree(iris, train, InduceConfig(criterion=criterion, min_samples_leaf=1, min_samples_split=2))
    splits = 0
    for node, members in route_rows(tree.root, iris.rows, train):
        if not isinstance(node, Split):
            continue
        go_left = iris.rows[members, node.feature] <= node.threshold
        left, right = members[go_left], members[~go_left]
        assert left.size and right.size
        children = (
            left.size * impurity(iris.class_counts(left), criterion)
            + right.size * impurity(iris.class_counts(right), criterion)
        ) / members.size
        assert impurity(iris.class_counts(members), criterion) - children > 0
        splits += 1
    assert splits >= 2


def test_empty_indices(iris):
    with pytest.raises(ValidationError):
        induce_tree(iris, [], InduceConfig())


def test_config_validation():
    with pytest.raises(ConfigError):
        InduceConfig(criterion="bogus")
    with pytest.raises(ConfigError):
        InduceConfig(min_samples_leaf=0)
    with pytest.raises(ConfigError):
        InduceConfig.from_dict({"criterion": "gini", "depth": 3})
    with pytest.raises(ConfigError):
        EnsembleConfig(base_configs=())


def test_bagging_is_deterministic(iris):
    config = InduceConfig()
    first = bag(iris, np.arange(150), config, 1, seed=4)
    second = bag(iris, np.arange(150), config, 1, seed=4)
    assert serialize(first[0]) == serialize(second[0])


def test_bagging_round_count(iris):
    trees = bag(iris, np.arange(150), InduceConfig(), 10, seed=0)
    assert len(trees) == 10
    assert len({serialize(t) for t in trees}) > 1


def test_boost_stops_on_perfect_round(dataset_factory):
    xs = np.concatenate([np.linspace(0.0, 4.0, 20), np.linspace(6.0, 10.0, 20)])
    ds = dataset_factory(xs.reshape(-1, 1), (xs > 5).astype(int))
    assert len(boost(ds, np.arange(40), 5, 3, seed=0)) == 1


def test_boost_weights_stay_normalised(blobs):
    rounds = []
    members = adaboost(blobs, np.arange(blobs.n_samples), 5, 1, seed=2, on_round=lambda r, w: rounds.append(w))
    assert 1 <= len(members) <= 5
    assert rounds
    assert all(np.all(w >= 0) for w in rounds)
    assert all(w.sum() == pytest.approx(1.0) for w in rounds)
    # 保留的树加权误差都低于 1 - 1/C, 因此投票权重为正
    assert all(alpha > 0 for _, alpha in members)


def test_pool_size(iris):
    config = EnsembleConfig(bagging_rounds=4, boosting_rounds=0)
    assert len(build_population_pool(iris, np.arange(150), config)) == 10

    config = EnsembleConfig(bagging_rounds=2, boosting_rounds=3)
    pool = build_population_pool(iris, np.arange(150), config)
    assert 2 * (1 + 2) < len(pool) <= config.max_pool_size


def test_pool_trees_beat_chance_on_iris(iris):
    grow, validation = split_half(iris, np.arange(150), 0)
    pool = build_population_pool(iris, grow, EnsembleConfig(seed=0))
    assert len(pool) > 2
    for tree in pool:
        assert accuracy(tree, iris, validation) > 0.55


def test_default_pool_size():
    assert EnsembleConfig().max_pool_size == 32


def test_ensemble_from_dict_expands_criteria():
    config = EnsembleConfig.from_dict({"criteria": ["entropy"], "bagging_rounds": 1}, {"min_samples_leaf": 3})
    assert len(config.base_configs) == 1
    assert config.base_configs[0].criterion is Criterion.ENTROPY
    assert config.base_configs[0].min_samples_leaf == 3
