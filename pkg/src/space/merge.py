# 决策空间合并: 扫描线求两组区域的全部交集
#
# 每一维上把区域投影为区间并排序, 两个区间 (a_lo, a_hi] 与 (b_lo, b_hi] 内部相交当且仅当
#   a_lo <= b_lo < a_hi   (b 的起点落在 a 内)   或
#   b_lo <  a_lo < b_hi   (a 的起点严格落在 b 内)
# 两种情况各是有序数组上的一次区间查询, 因此某一维的相交对可在 O(n log n + 输出) 内枚举。
# 先统计每一维的相交对数量, 从最有选择性的一维展开候选对, 再逐维过滤。

from typing import Tuple

import numpy as np

from ..errors import ValidationError
from .regions import RegionSet


def _check_compatible(a: RegionSet, b: RegionSet) -> Tuple[np.ndarray, np.ndarray]:
    if a.k != b.k:
        raise ValidationError(f"区域集合维度不一致: {a.k} vs {b.k}")
    if a.n_classes != b.n_classes:
        raise ValidationError(f"区域集合类别数不一致: {a.n_classes} vs {b.n_classes}")
    domain_lower = np.maximum(a.domain_lower, b.domain_lower)
    domain_upper = np.minimum(a.domain_upper, b.domain_upper)
    if not np.all(domain_lower < domain_upper):
        raise ValidationError("两个区域集合的定义域不相交")
    return domain_lower, domain_upper


def _ranges(sorted_lower: np.ndarray, queries_lo: np.ndarray, queries_hi: np.ndarray, lo_side: str):
    start = np.searchsorted(sorted_lower, queries_lo, side=lo_side)
    end = np.searchsorted(sorted_lower, queries_hi, side="left")
    return start, np.maximum(end - start, 0)


def _expand(start: np.ndarray, lengths: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """把每个查询的 [start, start+len) 展开成 (查询编号, 有序位置) 对"""
    total = int(lengths.sum())
    owner = np.repeat(np.arange(lengths.shape[0]), lengths)
    offsets = np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    return owner, np.repeat(start, lengths) + offsets


class _AxisSweep:
    """单一维度上的有序投影"""

    def __init__(self, a_lo: np.ndarray, a_hi: np.ndarray, b_lo: np.ndarray, b_hi: np.ndarray):
        self.a_order = np.argsort(a_lo, kind="mergesort")
        self.b_order = np.argsort(b_lo, kind="mergesort")
        # b 的起点落在 a 内
        self.start_ab, self.len_ab = _ranges(b_lo[self.b_order], a_lo, a_hi, "left")
        # a 的起点严格落在 b 内
        self.start_ba, self.len_ba = _ranges(a_lo[self.a_order], b_lo, b_hi, "right")

    @property
    def pair_count(self) -> int:
        return int(self.len_ab.sum() + self.len_ba.sum())

    def pairs(self) -> Tuple[np.ndarray, np.ndarray]:
        ia1, pos = _expand(self.start_ab, self.len_ab)
        ib1 = self.b_order[pos]
        ib2, pos = _expand(self.start_ba, self.len_ba)
        ia2 = self.a_order[pos]
        return np.concatenate([ia1, ia2]), np.concatenate([ib1, ib2])


def merge_regions(a: RegionSet, b: RegionSet) -> RegionSet:
    """两组区域两两求交 (扫描线), 交集区域的分布取两个父区域分布的算术平均"""
    domain_lower, domain_upper = _check_compatible(a, b)

    if len(a) and len(b):
        sweeps = [_AxisSweep(a.lower[:, d], a.upper[:, d], b.lower[:, d], b.upper[:, d]) for d in range(a.k)]
        pivot = int(np.argmin([s.pair_count for s in sweeps]))
        ia, ib = sweeps[pivot].pairs()
        for d in range(a.k):
            if d == pivot or ia.size == 0:
                continue
            keep = np.maximum(a.lower[ia, d], b.lower[ib, d]) < np.minimum(a.upper[ia, d], b.upper[ib, d])
            ia, ib = ia[keep], ib[keep]
    else:
        ia = ib = np.empty(0, dtype=np.int64)

    merged = RegionSet(
        lower=np.maximum(a.lower[ia], b.lower[ib]),
        upper=np.minimum(a.upper[ia], b.upper[ib]),
        distributions=(a.distributions[ia] + b.distributions[ib]) / 2.0,
        domain_lower=domain_lower,
        domain_upper=domain_upper,
    )
    return merged.canonical()


def naive_merge(a: RegionSet, b: RegionSet) -> RegionSet:
    """逐对检查所有区域的朴素合并, 仅作为测试基准"""
    domain_lower, domain_upper = _check_compatible(a, b)

    lowers, uppers, dists = [], [], []
    for ra in a.regions:
        for rb in b.regions:
            lower = tuple(max(x, y) for x, y in zip(ra.lower, rb.lower))
            upper = tuple(min(x, y) for x, y in zip(ra.upper, rb.upper))
            if all(lo < hi for lo, hi in zip(lower, upper)):
                lowers.append(lower)
                uppers.append(upper)
                dists.append((np.asarray(ra.distribution) + np.asarray(rb.distribution)) / 2.0)

    n = len(lowers)
    merged = RegionSet(
        lower=np.array(lowers, dtype=float).reshape(n, a.k),
        upper=np.array(uppers, dtype=float).reshape(n, a.k),
        distributions=np.array(dists, dtype=float).reshape(n, a.n_classes),
        domain_lower=domain_lower,
        domain_upper=domain_upper,
    )
    return merged.canonical()
