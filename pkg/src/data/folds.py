# 分层重复交叉验证与训练/验证对半划分

import hashlib
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from ..seeding import derive_rng
from .dataset import Dataset


def _stratified_assign(labels: np.ndarray, n_parts: int, rng: np.random.Generator) -> np.ndarray:
    """按类别打乱后轮转分配, 每个类别在各份中的数量至多相差 1

    轮转位置跨类别连续计数, 因此各份的总样本数也至多相差 1。
    """
    assignment = np.empty(labels.shape[0], dtype=np.int64)
    offset = 0
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(members.shape[0])]
        assignment[members] = (offset + np.arange(members.shape[0])) % n_parts
        offset += members.shape[0]
    return assignment


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """重复 k 折划分方案, assignments[r][i] 为第 r 次重复中样本 i 所在折"""

    n_folds: int
    n_repeats: int
    assignments: Tuple[np.ndarray, ...]
    seed: int

    def split(self, repeat: int, fold: int) -> Tuple[np.ndarray, np.ndarray]:
        """返回 (训练索引, 测试索引)"""
        if not 0 <= repeat < self.n_repeats or not 0 <= fold < self.n_folds:
            raise ValidationError(f"无效的 (repeat, fold): ({repeat}, {fold})")
        assignment = self.assignments[repeat]
        return np.flatnonzero(assignment != fold), np.flatnonzero(assignment == fold)

    def fingerprint(self, repeat: int) -> str:
        """某次重复的划分指纹, 用于检查各算法是否共用同一划分"""
        return hashlib.sha256(self.assignments[repeat].tobytes()).hexdigest()


def make_folds(dataset: Dataset, n_folds: int, n_repeats: int, seed: int) -> FoldPlan:
    """生成分层的重复 k 折划分, 固定种子时结果确定"""
    if n_folds < 2:
        raise ValidationError(f"n_folds 至少为 2, 实际为 {n_folds}")
    if n_repeats < 1:
        raise ValidationError(f"n_repeats 至少为 1, 实际为 {n_repeats}")

    counts = dataset.class_counts()
    for cls, count in enumerate(counts):
        if count < n_folds:
            raise ValidationError(
                f"类别 {dataset.class_names[cls]} 只有 {count} 个样本, 少于折数 {n_folds}"
            )

    assignments = []
    for repeat in range(n_repeats):
        rng = derive_rng(seed, "folds", repeat)
        assignment = _stratified_assign(dataset.labels, n_folds, rng)
        assignment.setflags(write=False)
        assignments.append(assignment)

    return FoldPlan(n_folds=n_folds, n_repeats=n_repeats, assignments=tuple(assignments), seed=seed)


def split_half(dataset: Dataset, indices: Sequence[int], seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """把给定索引分层地对半划分为 (生长集, 验证集)"""
    indices = np.asarray(indices, dtype=np.int64)
    if indices.shape[0] < 2:
        raise ValidationError(f"至少需要 2 个样本才能对半划分, 实际为 {indices.shape[0]}")

    rng = derive_rng(seed, "split")
    halves = _stratified_assign(dataset.labels[indices], 2, rng)
    return np.sort(indices[halves == 0]), np.sort(indices[halves == 1])
