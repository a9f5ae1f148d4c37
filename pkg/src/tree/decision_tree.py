# 二叉轴平行决策树: 预测、节点统计与结构编辑原语
#
# 约定: 内部节点 (feature, threshold) 上 x[feature] <= threshold 走左子树, 否则走右子树。
# 树是不可变值, 所有编辑操作都返回新树。

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from ..errors import ValidationError

DISTRIBUTION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Leaf:
    """叶节点, 保存完整的类别概率分布"""

    distribution: Tuple[float, ...]

    def __post_init__(self):
        dist = tuple(float(p) for p in self.distribution)
        if not dist:
            raise ValidationError("叶节点分布不能为空")
        if any(p < 0 or math.isnan(p) for p in dist):
            raise ValidationError(f"叶节点分布存在负值: {dist}")
        if abs(math.fsum(dist) - 1.0) > DISTRIBUTION_TOLERANCE:
            raise ValidationError(f"叶节点分布之和不为 1: {dist}")
        object.__setattr__(self, "distribution", dist)

    @property
    def label(self) -> int:
        # 并列时取编号最小的类别
        return int(np.argmax(self.distribution))


@dataclass(frozen=True)
class Split:
    """内部节点: 一个轴平行超平面 x[feature] = threshold"""

    feature: int
    threshold: float
    left: "Node"
    right: "Node"


Node = Union[Leaf, Split]

_revision_counter = itertools.count(1)


@dataclass(frozen=True)
class NodeHandle:
    """指向某一版本树中节点的句柄; path 由 0 (左) / 1 (右) 组成"""

    path: Tuple[int, ...]
    revision: int


def make_leaf(counts: Sequence[float]) -> Leaf:
    """由 (非负) 计数构造归一化的叶节点"""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise ValidationError("叶节点计数之和必须为正")
    dist = counts / total
    # 消除归一化的舍入误差, 保证严格和为 1 的容差
    dist[-1] = max(0.0, 1.0 - dist[:-1].sum())
    return Leaf(tuple(dist))


def _walk(node: Node, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], Node]]:
    """先序遍历, 产出 (路径, 节点)"""
    yield path, node
    if isinstance(node, Split):
        yield from _walk(node.left, path + (0,))
        yield from _walk(node.right, path + (1,))


def _count(node: Node) -> int:
    if isinstance(node, Leaf):
        return 1
    return 1 + _count(node.left) + _count(node.right)


def _depth(node: Node) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(_depth(node.left), _depth(node.right))


@dataclass(frozen=True)
class DecisionTree:
    """决策树值对象, revision 用于识别过期句柄 (不参与相等比较)"""

    root: Node
    n_features: int
    n_classes: int
    revision: int = field(default_factory=lambda: next(_revision_counter), compare=False, repr=False)

    def __post_init__(self):
        if self.n_features < 1 or self.n_classes < 2:
            raise ValidationError(f"无效的树维度: n_features={self.n_features}, n_classes={self.n_classes}")
        for _, node in _walk(self.root):
            if isinstance(node, Leaf):
                if len(node.distribution) != self.n_classes:
                    raise ValidationError(
                        f"叶节点分布长度 {len(node.distribution)} 与类别数 {self.n_classes} 不一致"
                    )
            elif isinstance(node, Split):
                if not 0 <= node.feature < self.n_features:
                    raise ValidationError(f"特征编号 {node.feature} 超出范围 [0, {self.n_features})")
                if not math.isfinite(node.threshold):
                    raise ValidationError(f"阈值必须为有限实数, 实际为 {node.threshold}")
            else:
                raise ValidationError(f"未知的节点类型: {type(node).__name__}")

    @cached_property
    def node_count(self) -> int:
        return _count(self.root)

    @cached_property
    def depth(self) -> int:
        return _depth(self.root)

    def with_root(self, root: Node) -> "DecisionTree":
        return DecisionTree(root=root, n_features=self.n_features, n_classes=self.n_classes)

    def used_features(self) -> List[int]:
        return sorted({node.feature for _, node in _walk(self.root) if isinstance(node, Split)})


def bare_leaf_tree(distribution: Sequence[float], n_features: int) -> DecisionTree:
    leaf = Leaf(tuple(distribution))
    return DecisionTree(root=leaf, n_features=n_features, n_classes=len(leaf.distribution))


# ---------------------------------------------------------------------------
# 预测
# ---------------------------------------------------------------------------


def _check_rows(tree: DecisionTree, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1)
    if rows.ndim != 2 or rows.shape[1] != tree.n_features:
        raise ValidationError(f"样本维度 {rows.shape[-1]} 与树的特征数 {tree.n_features} 不一致")
    return rows


def predict(tree: DecisionTree, row: Sequence[float]) -> int:
    """单个样本预测, 返回叶节点分布的 argmax (并列取最小编号)"""
    row = np.asarray(row, dtype=float)
    if row.ndim != 1 or row.shape[0] != tree.n_features:
        raise ValidationError(f"样本长度 {row.shape} 与树的特征数 {tree.n_features} 不一致")
    node = tree.root
    while isinstance(node, Split):
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node.label


def predict_proba(tree: DecisionTree, rows: np.ndarray) -> np.ndarray:
    """批量返回每个样本所落叶节点的类别分布, 形状 (n, n_classes)"""
    rows = _check_rows(tree, rows)
    out = np.empty((rows.shape[0], tree.n_classes), dtype=float)

    def route(node: Node, idx: np.ndarray):
        if idx.size == 0:
            return
        if isinstance(node, Leaf):
            out[idx] = node.distribution
            return
        go_left = rows[idx, node.feature] <= node.threshold
        route(node.left, idx[go_left])
        route(node.right, idx[~go_left])

    route(tree.root, np.arange(rows.shape[0]))
    return out


def predict_many(tree: DecisionTree, rows: np.ndarray) -> np.ndarray:
    """批量预测类别编号"""
    return np.argmax(predict_proba(tree, rows), axis=1)


def node_count(tree: DecisionTree) -> int:
    """内部节点数 + 叶节点数"""
    return tree.node_count


def accuracy(tree: DecisionTree, dataset, indices: Sequence[int]) -> float:
    """在给定样本上的准确率"""
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise ValidationError("计算准确率需要非空的样本索引")
    predictions = predict_many(tree, dataset.rows[indices])
    return float(np.mean(predictions == dataset.labels[indices]))


# ---------------------------------------------------------------------------
# 结构编辑原语 (供变异算子使用)
# ---------------------------------------------------------------------------


def list_subtree_roots(tree: DecisionTree) -> List[NodeHandle]:
    """所有节点 (含根与叶) 的句柄, 先序"""
    return [NodeHandle(path, tree.revision) for path, _ in _walk(tree.root)]


def list_internal_nodes(tree: DecisionTree) -> List[NodeHandle]:
    """所有内部节点的句柄, 先序"""
    return [NodeHandle(path, tree.revision) for path, node in _walk(tree.root) if isinstance(node, Split)]


def _resolve(tree: DecisionTree, handle: NodeHandle) -> Node:
    if handle.revision != tree.revision:
        raise ValidationError(f"句柄已过期: 句柄版本 {handle.revision}, 树版本 {tree.revision}")
    node = tree.root
    for step in handle.path:
        if not isinstance(node, Split) or step not in (0, 1):
            raise ValidationError(f"句柄路径无效: {handle.path}")
        node = node.left if step == 0 else node.right
    return node


def subtree_at(tree: DecisionTree, handle: NodeHandle) -> Node:
    return _resolve(tree, handle)


def _rebuild(node: Node, path: Tuple[int, ...], replacement: Node) -> Node:
    if not path:
        return replacement
    if path[0] == 0:
        return Split(node.feature, node.threshold, _rebuild(node.left, path[1:], replacement), node.right)
    return Split(node.feature, node.threshold, node.left, _rebuild(node.right, path[1:], replacement))


def _as_node(subtree: Union[Node, DecisionTree], tree: DecisionTree) -> Node:
    if isinstance(subtree, DecisionTree):
        if subtree.n_classes != tree.n_classes or subtree.n_features != tree.n_features:
            raise ValidationError("替换子树的维度与原树不一致")
        return subtree.root
    return subtree


def replace_subtree(tree: DecisionTree, handle: NodeHandle, subtree: Union[Node, DecisionTree]) -> DecisionTree:
    """用 subtree 替换句柄指向的子树, 返回新树 (原树不变)"""
    _resolve(tree, handle)
    return tree.with_root(_rebuild(tree.root, handle.path, _as_node(subtree, tree)))


def is_ancestor(a: NodeHandle, b: NodeHandle) -> bool:
    """a 是否为 b 的祖先 (或同一节点)"""
    return b.path[: len(a.path)] == a.path


def swap_subtrees(tree: DecisionTree, first: NodeHandle, second: NodeHandle) -> DecisionTree:
    """交换两棵互不嵌套的子树"""
    a = _resolve(tree, first)
    b = _resolve(tree, second)
    if is_ancestor(first, second) or is_ancestor(second, first):
        raise ValidationError(f"子树 {first.path} 与 {second.path} 互相嵌套, 不能交换")
    root = _rebuild(tree.root, first.path, b)
    root = _rebuild(root, second.path, a)
    return tree.with_root(root)
