# 决策空间: 轴对齐超矩形区域集合
#
# 区域在每一维上是半开区间 (lower, upper], 与决策树 "<= 走左" 的约定一致,
# 边界上的点只属于左侧区域。

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import orjson

from ..errors import ParseError, ValidationError
from ..tree import DecisionTree, Leaf, Node

DISTRIBUTION_TOLERANCE = 1e-9

# 定位点时每批处理的点数, 控制 (点 x 区域 x 维) 布尔矩阵的大小
_LOCATE_CHUNK = 2048


@dataclass(frozen=True)
class Region:
    """单个轴对齐区域及其类别分布"""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    distribution: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValidationError("区域上下界维度不一致")
        if any(not lo < hi for lo, hi in zip(self.lower, self.upper)):
            raise ValidationError(f"区域内部为空: lower={self.lower}, upper={self.upper}")
        if any(p < 0 for p in self.distribution) or abs(math.fsum(self.distribution) - 1.0) > DISTRIBUTION_TOLERANCE:
            raise ValidationError(f"区域分布无效: {self.distribution}")

    @property
    def k(self) -> int:
        return len(self.lower)

    @property
    def label(self) -> int:
        return int(np.argmax(self.distribution))

    def contains(self, point: Sequence[float]) -> bool:
        return all(lo < x <= hi for lo, x, hi in zip(self.lower, point, self.upper))


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RegionSet:
    """一个决策空间: 互不相交且覆盖定义域的区域集合 (以数组形式存储)

    lower / upper 形状为 (n, k), distributions 形状为 (n, n_classes)。
    """

    lower: np.ndarray
    upper: np.ndarray
    distributions: np.ndarray
    domain_lower: np.ndarray
    domain_upper: np.ndarray

    def __post_init__(self):
        lower, upper = _frozen(self.lower), _frozen(self.upper)
        dists = _frozen(self.distributions)
        d_lower, d_upper = _frozen(self.domain_lower), _frozen(self.domain_upper)

        if lower.ndim != 2 or lower.shape != upper.shape:
            raise ValidationError(f"区域上下界形状不一致: {lower.shape} vs {upper.shape}")
        if dists.ndim != 2 or dists.shape[0] != lower.shape[0]:
            raise ValidationError("区域分布数量与区域数量不一致")
        if d_lower.shape != (lower.shape[1],) or d_upper.shape != (lower.shape[1],):
            raise ValidationError("定义域维度与区域维度不一致")
        if not np.all(d_lower < d_upper):
            raise ValidationError("定义域内部为空")
        if not np.all(lower < upper):
            raise ValidationError("存在内部为空的区域")
        if lower.shape[0]:
            if np.any(dists < 0) or np.any(np.abs(dists.sum(axis=1) - 1.0) > DISTRIBUTION_TOLERANCE):
                raise ValidationError("存在无效的区域分布")

        for name, value in (
            ("lower", lower),
            ("upper", upper),
            ("distributions", dists),
            ("domain_lower", d_lower),
            ("domain_upper", d_upper),
        ):
            object.__setattr__(self, name, value)

    # ------------------------------------------------------------------

    @classmethod
    def from_regions(
        cls,
        regions: Iterable[Region],
        n_classes: int,
        k: int,
        domain: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
    ) -> "RegionSet":
        regions = list(regions)
        if domain is None:
            domain = ([-math.inf] * k, [math.inf] * k)
        return cls(
            lower=np.array([r.lower for r in regions], dtype=float).reshape(len(regions), k),
            upper=np.array([r.upper for r in regions], dtype=float).reshape(len(regions), k),
            distributions=np.array([r.distribution for r in regions], dtype=float).reshape(len(regions), n_classes),
            domain_lower=np.asarray(domain[0], dtype=float),
            domain_upper=np.asarray(domain[1], dtype=float),
        )

    @property
    def k(self) -> int:
        return int(self.lower.shape[1])

    @property
    def n_classes(self) -> int:
        return int(self.distributions.shape[1])

    def __len__(self) -> int:
        return int(self.lower.shape[0])

    @property
    def regions(self) -> Tuple[Region, ...]:
        return tuple(
            Region(tuple(lo), tuple(hi), tuple(p))
            for lo, hi, p in zip(self.lower.tolist(), self.upper.tolist(), self.distributions.tolist())
        )

    @property
    def labels(self) -> np.ndarray:
        return np.argmax(self.distributions, axis=1)

    def canonical(self) -> "RegionSet":
        """按 (下界, 上界, 分布) 字典序排序, 使多重集合比较退化为逐元素比较"""
        if len(self) <= 1:
            return self
        # np.lexsort 以最后一个 key 为主序
        keys = (
            [self.distributions[:, c] for c in reversed(range(self.n_classes))]
            + [self.upper[:, d] for d in reversed(range(self.k))]
            + [self.lower[:, d] for d in reversed(range(self.k))]
        )
        order = np.lexsort(keys)
        return RegionSet(
            self.lower[order], self.upper[order], self.distributions[order], self.domain_lower, self.domain_upper
        )

    def same_regions(self, other: "RegionSet") -> bool:
        """作为区域多重集合是否完全相同 (精确比较)"""
        a, b = self.canonical(), other.canonical()
        return (
            a.lower.shape == b.lower.shape
            and a.distributions.shape == b.distributions.shape
            and np.array_equal(a.lower, b.lower)
            and np.array_equal(a.upper, b.upper)
            and np.array_equal(a.distributions, b.distributions)
        )

    # ------------------------------------------------------------------

    def membership(self, points: np.ndarray) -> np.ndarray:
        """每个点落在多少个区域中 (划分正确时恒为 1)"""
        counts = np.zeros(points.shape[0], dtype=np.int64)
        for start, inside in self._inside_chunks(points):
            counts[start : start + inside.shape[0]] = inside.sum(axis=1)
        return counts

    def locate(self, points: np.ndarray) -> np.ndarray:
        """每个点所在区域的编号, 不在任何区域时为 -1"""
        located = np.full(points.shape[0], -1, dtype=np.int64)
        for start, inside in self._inside_chunks(points):
            hit = inside.any(axis=1)
            located[start : start + inside.shape[0]] = np.where(hit, np.argmax(inside, axis=1), -1)
        return located

    def predict(self, points: np.ndarray) -> np.ndarray:
        """每个点所在区域分布的 argmax"""
        located = self.locate(points)
        if np.any(located < 0):
            raise ValidationError("存在不被任何区域覆盖的点")
        return self.labels[located]

    def _inside_chunks(self, points: np.ndarray):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.k:
            raise ValidationError(f"点的维度应为 {self.k}")
        for start in range(0, points.shape[0], _LOCATE_CHUNK):
            chunk = points[start : start + _LOCATE_CHUNK, None, :]
            inside = np.all((self.lower[None] < chunk) & (chunk <= self.upper[None]), axis=2)
            yield start, inside

    # ------------------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "n_classes": self.n_classes,
            "domain": {"lower": _encode_bounds(self.domain_lower), "upper": _encode_bounds(self.domain_upper)},
            "regions": [
                {"lower": _encode_bounds(lo), "upper": _encode_bounds(hi), "distribution": p.tolist()}
                for lo, hi, p in zip(self.lower, self.upper, self.distributions)
            ],
        }

    def to_json(self) -> str:
        """调试用 JSON 导出, 无穷边界写作 "-inf" / "inf" """
        return orjson.dumps(self.to_dict(), option=orjson.OPT_INDENT_2).decode("utf-8")

    @classmethod
    def from_json(cls, text: str) -> "RegionSet":
        try:
            raw = orjson.loads(text)
            k, n_classes = raw["k"], raw["n_classes"]
            regions = raw["regions"]
            return cls(
                lower=np.array([_decode_bounds(r["lower"]) for r in regions], dtype=float).reshape(len(regions), k),
                upper=np.array([_decode_bounds(r["upper"]) for r in regions], dtype=float).reshape(len(regions), k),
                distributions=np.array([r["distribution"] for r in regions], dtype=float).reshape(
                    len(regions), n_classes
                ),
                domain_lower=np.array(_decode_bounds(raw["domain"]["lower"]), dtype=float),
                domain_upper=np.array(_decode_bounds(raw["domain"]["upper"]), dtype=float),
            )
        except (orjson.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise ParseError(f"区域集合文档无效: {e}") from e


def _encode_bounds(values: np.ndarray) -> list:
    return ["-inf" if v == -math.inf else "inf" if v == math.inf else float(v) for v in values]


def _decode_bounds(values: list) -> list:
    sentinels = {"-inf": -math.inf, "inf": math.inf}
    decoded = []
    for v in values:
        if isinstance(v, str):
            if v not in sentinels:
                raise ValueError(f"未知的边界标记 {v!r}")
            decoded.append(sentinels[v])
        else:
            decoded.append(float(v))
    return decoded


def tree_to_regions(tree: DecisionTree, k: int) -> RegionSet:
    """把决策树转换为区域集合: 每个叶节点对应一个区域"""
    used = tree.used_features()
    if used and used[-1] >= k:
        raise ValidationError(f"树使用了特征 {used[-1]}, 超出维度 k={k}")

    lowers, uppers, dists = [], [], []

    def descend(node: Node, lower: np.ndarray, upper: np.ndarray):
        if isinstance(node, Leaf):
            lowers.append(lower)
            uppers.append(upper)
            dists.append(node.distribution)
            return
        f, t = node.feature, node.threshold
        # 阈值落在当前盒子之外时一侧为空, 该分支不可达
        if lower[f] < min(t, upper[f]):
            left_upper = upper.copy()
            left_upper[f] = min(t, upper[f])
            descend(node.left, lower, left_upper)
        if max(t, lower[f]) < upper[f]:
            right_lower = lower.copy()
            right_lower[f] = max(t, lower[f])
            descend(node.right, right_lower, upper)

    descend(tree.root, np.full(k, -math.inf), np.full(k, math.inf))
    n = len(lowers)
    return RegionSet(
        lower=np.array(lowers, dtype=float).reshape(n, k),
        upper=np.array(uppers, dtype=float).reshape(n, k),
        distributions=np.array(dists, dtype=float).reshape(n, tree.n_classes),
        domain_lower=np.full(k, -math.inf),
        domain_upper=np.full(k, math.inf),
    )
