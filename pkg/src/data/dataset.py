# 数据集与特征描述

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError


class FeatureKind(str, Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class FeatureSpec:
    """单个特征的类型与取值范围

    离散特征按 0..category_count-1 做序数编码, categories 保存编码对应的原始字符串,
    用于解码回原值。
    """

    name: str
    kind: FeatureKind
    observed_range: Tuple[float, float]
    category_count: Optional[int] = None
    categories: Tuple[str, ...] = ()

    def __post_init__(self):
        low, high = self.observed_range
        if not low <= high:
            raise ValidationError(f"特征 {self.name} 的取值范围无效: ({low}, {high})")
        if self.kind is FeatureKind.DISCRETE:
            if self.category_count is None or self.category_count < 2:
                raise ValidationError(f"离散特征 {self.name} 至少需要 2 个类别")
            if self.categories and len(self.categories) != self.category_count:
                raise ValidationError(f"离散特征 {self.name} 的类别表长度与 category_count 不一致")

    @property
    def is_discrete(self) -> bool:
        return self.kind is FeatureKind.DISCRETE

    def decode(self, value: float) -> str:
        """将编码值还原为原始类别字符串 (连续特征原样返回)"""
        if not self.is_discrete:
            return repr(float(value))
        code = int(value)
        if code != value or not 0 <= code < len(self.categories):
            raise ValidationError(f"特征 {self.name} 没有编码为 {value} 的类别")
        return self.categories[code]


@dataclass(frozen=True, eq=False)
class Dataset:
    """已加载、已插补的表格数据, 构造后只读"""

    features: Tuple[FeatureSpec, ...]
    rows: np.ndarray
    labels: np.ndarray
    class_names: Tuple[str, ...]
    name: str = field(default="dataset", compare=False)

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        labels = np.array(self.labels, dtype=np.int64)

        if rows.ndim != 2 or rows.shape[1] != len(self.features):
            raise ValidationError(f"数据矩阵形状 {rows.shape} 与特征数 {len(self.features)} 不匹配")
        if labels.shape != (rows.shape[0],):
            raise ValidationError("标签数量与样本数量不一致")
        if np.isnan(rows).any():
            raise ValidationError("数据中仍存在缺失值")
        if len(self.class_names) < 2:
            raise ValidationError("至少需要 2 个类别")
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.class_names)):
            raise ValidationError("存在无效的类别编号")

        counts = np.bincount(labels, minlength=len(self.class_names))
        empty = [self.class_names[c] for c in np.flatnonzero(counts == 0)]
        if empty:
            raise ValidationError(f"以下类别没有样本: {', '.join(empty)}")

        rows.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "class_names", tuple(self.class_names))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_features(self) -> int:
        return len(self.features)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self, indices: Optional[Sequence[int]] = None) -> np.ndarray:
        labels = self.labels if indices is None else self.labels[np.asarray(indices, dtype=np.int64)]
        return np.bincount(labels, minlength=self.n_classes)

    def value_ranges(self, indices: Optional[Sequence[int]] = None) -> np.ndarray:
        """各特征在给定样本上的 (最小值, 最大值), 形状为 (特征数, 2)"""
        if indices is None:
            return np.array([f.observed_range for f in self.features], dtype=float)
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size == 0:
            raise ValidationError("计算取值范围需要非空的样本索引")
        rows = self.rows[indices]
        return np.column_stack([rows.min(axis=0), rows.max(axis=0)])

    def class_distribution(self) -> Tuple[float, ...]:
        """各类别样本占比 (百分比)"""
        counts = self.class_counts()
        return tuple(float(c) for c in 100.0 * counts / counts.sum())

    def summary(self) -> dict:
        """数据集特征概览"""
        return {
            "name": self.name,
            "samples": self.n_samples,
            "continuous": sum(not f.is_discrete for f in self.features),
            "discrete": sum(f.is_discrete for f in self.features),
            "class_dist": [round(p, 1) for p in self.class_distribution()],
        }
