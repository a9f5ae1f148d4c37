# 贪心自顶向下决策树归纳 (gini / entropy)

from typing import Optional, Sequence, Tuple

import numpy as np

from ..data import Dataset
from ..errors import ValidationError
from ..tree import DecisionTree, Leaf, Node, Split, make_leaf
from .config import Criterion, InduceConfig

# 增益低于该值视为没有增益, 避免浮点噪声产生无意义的划分
MIN_GAIN = 1e-12


def gini(p: np.ndarray) -> np.ndarray:
    """1 - sum(p^2), 支持按行批量计算"""
    p = np.asarray(p, dtype=float)
    return 1.0 - np.sum(p * p, axis=-1)


def entropy(p: np.ndarray) -> np.ndarray:
    """-sum(p * log2 p), 约定 0 * log 0 = 0"""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -np.sum(terms, axis=-1)


_IMPURITY = {Criterion.GINI: gini, Criterion.ENTROPY: entropy}


def impurity(counts: np.ndarray, criterion: Criterion) -> np.ndarray:
    """由类别计数计算不纯度"""
    counts = np.asarray(counts, dtype=float)
    totals = counts.sum(axis=-1, keepdims=True)
    return _IMPURITY[Criterion.parse(criterion)](counts / totals)


def laplace_leaf(counts: np.ndarray) -> Leaf:
    """拉普拉斯平滑: 每个类别计数加 1"""
    return make_leaf(np.asarray(counts, dtype=float) + 1.0)


def _midpoint(low: float, high: float) -> float:
    mid = (low + high) / 2.0
    # 相邻浮点数之间取不到严格中点时退回左端值, 保证 low <= t < high
    return mid if low <= mid < high else low


def find_best_split(
    X: np.ndarray,
    onehot: np.ndarray,
    criterion: Criterion,
    min_samples_leaf: int,
    feature_order: Sequence[int],
) -> Optional[Tuple[float, int, float]]:
    """在所有特征上寻找不纯度下降最大的 (增益, 特征, 阈值); 没有正增益时返回 None

    候选阈值为排序后相邻不同取值的中点。增益相同时保留 feature_order 中靠前的特征。
    """
    n = X.shape[0]
    parent = onehot.sum(axis=0)
    parent_impurity = float(impurity(parent, criterion))
    positions = np.arange(1, n)  # 左侧样本数

    best = None
    best_gain = MIN_GAIN
    for feature in feature_order:
        order = np.argsort(X[:, feature], kind="mergesort")
        values = X[order, feature]
        valid = (values[:-1] < values[1:]) & (positions >= min_samples_leaf) & (n - positions >= min_samples_leaf)
        if not valid.any():
            continue

        cumulative = np.cumsum(onehot[order], axis=0)[:-1][valid]
        n_left = positions[valid].astype(float)
        n_right = n - n_left
        children = (
            n_left * impurity(cumulative, criterion) + n_right * impurity(parent - cumulative, criterion)
        ) / n
        gains = parent_impurity - children

        pick = int(np.argmax(gains))
        if gains[pick] > best_gain:
            cut = np.flatnonzero(valid)[pick]
            best_gain = float(gains[pick])
            best = (best_gain, int(feature), _midpoint(float(values[cut]), float(values[cut + 1])))
    return best


def induce_tree(dataset: Dataset, indices: Sequence[int], config: InduceConfig) -> DecisionTree:
    """按配置的准则贪心地归纳一棵决策树

    停止条件: 达到深度上限、样本数不足 min_samples_split、节点已纯、或不存在正增益划分。
    叶节点分布为拉普拉斯平滑后的类别频率。
    """
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise ValidationError("归纳决策树需要非空的样本索引")

    X = dataset.rows[indices]
    y = dataset.labels[indices]
    n_classes = dataset.n_classes
    onehot = np.eye(n_classes, dtype=float)[y]
    rng = np.random.default_rng(config.seed)

    def grow(rows: np.ndarray, depth: int) -> Node:
        counts = onehot[rows].sum(axis=0)
        if (
            (config.max_depth is not None and depth >= config.max_depth)
            or rows.size < config.min_samples_split
            or np.count_nonzero(counts) <= 1
        ):
            return laplace_leaf(counts)

        split = find_best_split(
            X[rows], onehot[rows], config.criterion, config.min_samples_leaf, rng.permutation(X.shape[1])
        )
        if split is None:
            return laplace_leaf(counts)

        _, feature, threshold = split
        go_left = X[rows, feature] <= threshold
        return Split(feature, threshold, grow(rows[go_left], depth + 1), grow(rows[~go_left], depth + 1))

    root = grow(np.arange(indices.size), 0)
    return DecisionTree(root=root, n_features=dataset.n_features, n_classes=n_classes)
