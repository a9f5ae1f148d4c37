import math
import time

import numpy as np
import pytest

from conftest import random_boxes, random_tree, sample_points
from src.errors import ParseError, ValidationError
from src.space import (
    RegionSet,
    find_candidate_splits,
    merge_regions,
    naive_merge,
    reconstruct,
    regions_to_tree,
    tree_to_regions,
)
from src.tree import DecisionTree, Leaf, Split, bare_leaf_tree, predict_many

INF = math.inf
A = Leaf((0.9, 0.1))
B = Leaf((0.1, 0.9))


def single_split(feature: int, threshold: float, k: int) -> DecisionTree:
    return DecisionTree(root=Split(feature, threshold, A, B), n_features=k, n_classes=2)


def assert_same_predictions(tree: DecisionTree, other: DecisionTree, points: np.ndarray):
    assert np.array_equal(predict_many(tree, points), predict_many(other, points))


# ---------------------------------------------------------------------------
# tree_to_regions
# ---------------------------------------------------------------------------


def test_bare_leaf_is_one_unbounded_region():
    rs = tree_to_regions(bare_leaf_tree((0.5, 0.5), 2), 2)
    assert len(rs) == 1
    assert np.all(np.isinf(rs.lower)) and np.all(np.isinf(rs.upper))


def test_single_split_regions():
    rs = tree_to_regions(single_split(0, 5.0, 1), 1).canonical()
    assert rs.lower[:, 0].tolist() == [-INF, 5.0]
    assert rs.upper[:, 0].tolist() == [5.0, INF]
    assert rs.labels.tolist() == [0, 1]


def test_feature_outside_dimension():
    with pytest.raises(ValidationError):
        tree_to_regions(single_split(2, 1.0, 3), 2)


def test_unreachable_branch_is_dropped():
    inner = Split(0, 7.0, A, B)
    tree = DecisionTree(root=Split(0, 5.0, inner, A), n_features=1, n_classes=2)
    # x <= 5 之后 x <= 7 恒成立, 右分支不可达
    assert len(tree_to_regions(tree, 1)) == 2


def test_complete_tree_partitions_space():
    leaves = [Leaf((p, 1 - p)) for p in (0.1, 0.9, 0.2, 0.8, 0.3, 0.7, 0.4, 0.6)]
    level2 = [Split(2, 5.0, leaves[i], leaves[i + 1]) for i in range(0, 8, 2)]
    level1 = [Split(1, 3.0, level2[0], level2[1]), Split(1, 6.0, level2[2], level2[3])]
    tree = DecisionTree(root=Split(0, 4.0, *level1), n_features=3, n_classes=2)
    rs = tree_to_regions(tree, 3)
    assert len(rs) == 8
    points = sample_points(np.random.default_rng(0), 10_000, 3)
    assert np.all(rs.membership(points) == 1)


def test_random_trees_partition_and_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(40):
        k = int(rng.integers(1, 6))
        tree = random_tree(rng, k, depth=int(rng.integers(1, 7)))
        rs = tree_to_regions(tree, k)
        points = sample_points(rng, 2_000, k)
        assert np.all(rs.membership(points) == 1)
        assert np.array_equal(rs.predict(points), predict_many(tree, points))
        assert_same_predictions(tree, regions_to_tree(rs, rng), points)


@pytest.mark.slow
def test_partition_invariants_at_scale():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    for _ in range(200):
        k = int(rng.integers(1, 6))
        tree = random_tree(rng, k, depth=int(rng.integers(1, 7)))
        rs = tree_to_regions(tree, k)
        points = sample_points(rng, 10_000, k)
        assert np.all(rs.membership(points) == 1)
        assert_same_predictions(tree, regions_to_tree(rs, rng), points)
    assert time.perf_counter() - start < 60


# ---------------------------------------------------------------------------
# merge_regions / naive_merge
# ---------------------------------------------------------------------------


def test_one_dimensional_overlay():
    a = tree_to_regions(single_split(0, 5.0, 1), 1)
    b = tree_to_regions(single_split(0, 3.0, 1), 1)
    merged = merge_regions(a, b)
    assert len(merged) == 3
    assert merged.lower[:, 0].tolist() == [-INF, 3.0, 5.0]
    assert merged.upper[:, 0].tolist() == [3.0, 5.0, INF]
    # (3, 5] 上两棵树意见相反, 分布取平均
    assert merged.distributions[1].tolist() == pytest.approx([0.5, 0.5])
    assert merged.same_regions(naive_merge(a, b))


def test_self_merge_is_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        k = int(rng.integers(1, 5))
        rs = tree_to_regions(random_tree(rng, k, depth=5), k)
        assert merge_regions(rs, rs).same_regions(rs)


def test_merge_matches_naive_on_partitions():
    rng = np.random.default_rng(4)
    for _ in range(60):
        k = int(rng.integers(1, 5))
        a = tree_to_regions(random_tree(rng, k, depth=6), k)
        b = tree_to_regions(random_tree(rng, k, depth=6), k)
        assert merge_regions(a, b).same_regions(naive_merge(a, b))


def test_merge_matches_naive_on_arbitrary_boxes():
    rng = np.random.default_rng(5)
    for _ in range(40):
        k = int(rng.integers(1, 5))
        a, b = random_boxes(rng, 50, k), random_boxes(rng, 50, k)
        assert merge_regions(a, b).same_regions(naive_merge(a, b))


def test_merge_of_partitions_is_a_partition():
    rng = np.random.default_rng(6)
    for _ in range(20):
        k = int(rng.integers(1, 5))
        a = tree_to_regions(random_tree(rng, k, depth=5), k)
        b = tree_to_regions(random_tree(rng, k, depth=5), k)
        points = sample_points(rng, 2_000, k)
        assert np.all(merge_regions(a, b).membership(points) == 1)


@pytest.mark.slow
def test_merge_oracle_at_scale():
    rng = np.random.default_rng(7)
    elapsed = 0.0
    for _ in range(500):
        k = int(rng.integers(1, 5))
        a = tree_to_regions(random_tree(rng, k, depth=6), k)
        b = random_boxes(rng, int(rng.integers(1, 65)), k)
        start = time.perf_counter()
        merged = merge_regions(a, b)
        elapsed += time.perf_counter() - start
        assert merged.same_regions(naive_merge(a, b))
    assert elapsed < 30


def test_merge_empty_and_mismatched():
    a = tree_to_regions(single_split(0, 5.0, 2), 2)
    empty = RegionSet(np.empty((0, 2)), np.empty((0, 2)), np.empty((0, 2)), [-INF, -INF], [INF, INF])
    assert len(merge_regions(a, empty)) == 0
    with pytest.raises(ValidationError):
        merge_regions(a, tree_to_regions(single_split(0, 5.0, 1), 1))
    three_class = tree_to_regions(bare_leaf_tree((0.2, 0.3, 0.5), 2), 2)
    with pytest.raises(ValidationError):
        merge_regions(a, three_class)


def interval_tree(n: int, offset: float) -> RegionSet:
    """1 维平衡树的 n 个交替类别区间: 两组错开的区间合并时候选对数为 O(n), 朴素合并为 O(n^2)"""
    thresholds = np.arange(1, n) + offset

    def build(first: int, last: int):
        if last - first == 1:
            return A if first % 2 == 0 else B
        mid = (first + last) // 2
        return Split(0, float(thresholds[mid - 1]), build(first, mid), build(mid, last))

    return tree_to_regions(DecisionTree(root=build(0, n), n_features=1, n_classes=2), 1)


def best_time(merge, a: RegionSet, b: RegionSet, repeats: int) -> float:
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        merge(a, b)
        timings.append(time.perf_counter() - start)
    return min(timings)


@pytest.mark.slow
def test_merge_scales_better_than_naive():
    ratios = []
    for n in (64, 256, 1024):
        a, b = interval_tree(n, 0.0), interval_tree(n, 0.5)
        assert len(a) == n
        assert merge_regions(a, b).same_regions(naive_merge(a, b))
        fast = best_time(merge_regions, a, b, repeats=5)
        slow = best_time(naive_merge, a, b, repeats=1 if n > 256 else 3)
        ratios.append(slow / fast)
    assert all(later > earlier for earlier, later in zip(ratios, ratios[1:]))


# ---------------------------------------------------------------------------
# find_candidate_splits / reconstruct
# ---------------------------------------------------------------------------


def test_root_split_is_a_candidate():
    rng = np.random.default_rng(8)
    for _ in range(20):
        tree = random_tree(rng, 3, depth=4)
        if isinstance(tree.root, Leaf):
            continue
        rs = tree_to_regions(tree, 3)
        assert (tree.root.feature, tree.root.threshold) in find_candidate_splits(rs)


def test_two_regions_have_one_candidate():
    rs = tree_to_regions(single_split(0, 3.0, 2), 2)
    assert find_candidate_splits(rs) == [(0, 3.0)]


def test_overlay_has_both_candidates():
    merged = merge_regions(tree_to_regions(single_split(0, 3.0, 2), 2), tree_to_regions(single_split(1, 7.0, 2), 2))
    assert len(merged) == 4
    assert find_candidate_splits(merged) == [(0, 3.0), (1, 7.0)]


def test_candidates_inside_box():
    merged = merge_regions(tree_to_regions(single_split(0, 3.0, 2), 2), tree_to_regions(single_split(1, 7.0, 2), 2))
    assert find_candidate_splits(merged, ([-INF, -INF], [3.0, INF])) == [(1, 7.0)]


def test_single_region_reconstructs_to_leaf():
    rs = tree_to_regions(bare_leaf_tree((0.2, 0.8), 2), 2)
    tree = regions_to_tree(rs, np.random.default_rng(0))
    assert tree.root == Leaf((0.2, 0.8))


def test_reconstruct_empty_set():
    empty = RegionSet(np.empty((0, 1)), np.empty((0, 1)), np.empty((0, 2)), [-INF], [INF])
    with pytest.raises(ValidationError):
        reconstruct(empty, np.random.default_rng(0))


def test_overlay_reconstructs_without_fallback():
    merged = merge_regions(tree_to_regions(single_split(0, 3.0, 2), 2), tree_to_regions(single_split(1, 7.0, 2), 2))
    result = reconstruct(merged, np.random.default_rng(0))
    assert result.fallback_splits == 0
    assert result.regions.same_regions(merged)


def pinwheel() -> RegionSet:
    """5 个区域风车状排列, 任何面都会穿过某个区域"""
    lower = [[0, 0], [2, 0], [1, 2], [0, 1], [1, 1]]
    upper = [[2, 1], [3, 2], [3, 3], [1, 3], [2, 2]]
    dists = [[0.9, 0.1], [0.1, 0.9], [0.9, 0.1], [0.1, 0.9], [0.8, 0.2]]
    return RegionSet(lower, upper, dists, [0.0, 0.0], [3.0, 3.0])


def test_pinwheel_needs_fallback():
    rs = pinwheel()
    assert find_candidate_splits(rs) == []
    result = reconstruct(rs, np.random.default_rng(0))
    assert result.fallback_splits >= 1
    assert len(result.regions) > len(rs)

    points = np.random.default_rng(1).uniform(0.0, 3.0, size=(5_000, 2))
    points[:2_000] = np.round(points[:2_000] * 2) / 2
    points = points[np.all(points > 0, axis=1)]
    assert np.all(result.regions.membership(points) == 1)
    assert np.array_equal(predict_many(result.tree, points), rs.predict(points))


def test_reconstruction_is_seeded():
    rng = np.random.default_rng(9)
    a = tree_to_regions(random_tree(rng, 3, depth=5), 3)
    b = tree_to_regions(random_tree(rng, 3, depth=5), 3)
    merged = merge_regions(a, b)
    first = regions_to_tree(merged, np.random.default_rng(42))
    second = regions_to_tree(merged, np.random.default_rng(42))
    assert first == second


# ---------------------------------------------------------------------------
# JSON 导出
# ---------------------------------------------------------------------------


def test_region_json_round_trip():
    rs = tree_to_regions(random_tree(np.random.default_rng(10), 2, depth=4), 2)
    assert RegionSet.from_json(rs.to_json()).same_regions(rs)


def test_region_json_rejects_garbage():
    with pytest.raises(ParseError):
        RegionSet.from_json('{"k": 1}')
