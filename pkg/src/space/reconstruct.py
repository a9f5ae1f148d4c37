# 由区域集合重建单棵决策树
#
# 在当前盒子内, 超平面 x_d = v 若不穿过任何 (裁剪后) 区域的内部, 它就横跨整个盒子截面,
# 可以作为一个干净的划分。随机选一个干净划分后递归; 找不到时取穿过区域最少的面,
# 把被穿过的区域一分为二。

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..errors import ValidationError
from ..tree import DecisionTree, Leaf, Node, Split
from .regions import RegionSet

Box = Tuple[Sequence[float], Sequence[float]]


@dataclass(frozen=True)
class Reconstruction:
    """重建结果: 决策树、回退切分后的区域集合, 以及回退切分的次数"""

    tree: DecisionTree
    regions: RegionSet
    fallback_splits: int


def _clip(rs: RegionSet, box_lo: np.ndarray, box_hi: np.ndarray):
    lo = np.maximum(rs.lower, box_lo)
    hi = np.minimum(rs.upper, box_hi)
    keep = np.all(lo < hi, axis=1)
    return lo[keep], hi[keep], rs.distributions[keep]


def _facet_stats(lo: np.ndarray, hi: np.ndarray, box_lo: np.ndarray, box_hi: np.ndarray, d: int):
    """维度 d 上盒子内部的有限面坐标, 以及每个坐标的 (穿过数, 左侧数, 右侧数)"""
    values = np.unique(np.concatenate([lo[:, d], hi[:, d]]))
    values = values[np.isfinite(values) & (values > box_lo[d]) & (values < box_hi[d])]
    sorted_lo = np.sort(lo[:, d])
    sorted_hi = np.sort(hi[:, d])
    starts_below = np.searchsorted(sorted_lo, values, side="left")
    ends_at_or_below = np.searchsorted(sorted_hi, values, side="right")
    cuts = starts_below - ends_at_or_below
    return values, cuts, ends_at_or_below, lo.shape[0] - starts_below


def _clean_candidates(lo, hi, box_lo, box_hi) -> List[Tuple[int, float]]:
    candidates = []
    for d in range(lo.shape[1]):
        values, cuts, left, right = _facet_stats(lo, hi, box_lo, box_hi, d)
        clean = (cuts == 0) & (left > 0) & (right > 0)
        candidates.extend((d, float(v)) for v in values[clean])
    return candidates


def _fallback_split(lo, hi, box_lo, box_hi) -> Tuple[int, float]:
    """穿过区域最少的面; 并列时取 (维度, 坐标) 最小者"""
    best: Optional[Tuple[int, int, float]] = None
    for d in range(lo.shape[1]):
        values, cuts, left, right = _facet_stats(lo, hi, box_lo, box_hi, d)
        usable = (left > 0) & (right > 0)
        if not usable.any():
            continue
        pick = int(np.argmin(np.where(usable, cuts, np.iinfo(np.int64).max)))
        if best is None or cuts[pick] < best[0]:
            best = (int(cuts[pick]), d, float(values[pick]))
    if best is None:
        # 两两内部不相交的多个区域总存在可用的面
        raise ValidationError("区域相互重叠, 无法重建决策树")
    return best[1], best[2]


def find_candidate_splits(rs: RegionSet, box: Optional[Box] = None) -> List[Tuple[int, float]]:
    """盒子内所有干净的划分 (维度, 坐标), 按 (维度, 坐标) 升序"""
    box_lo, box_hi = _box_arrays(rs, box)
    lo, hi, _ = _clip(rs, box_lo, box_hi)
    if lo.shape[0] == 0:
        return []
    return _clean_candidates(lo, hi, box_lo, box_hi)


def _box_arrays(rs: RegionSet, box: Optional[Box]):
    if box is None:
        return rs.domain_lower, rs.domain_upper
    box_lo = np.asarray(box[0], dtype=float)
    box_hi = np.asarray(box[1], dtype=float)
    if box_lo.shape != (rs.k,) or box_hi.shape != (rs.k,):
        raise ValidationError(f"盒子维度应为 {rs.k}")
    return box_lo, box_hi


def reconstruct(rs: RegionSet, rng: np.random.Generator) -> Reconstruction:
    """递归地把区域集合转成决策树

    盒子内只剩一个区域, 或所有区域的 argmax 类别相同时输出叶节点, 叶分布为各区域分布的
    算术平均。否则在干净划分中均匀随机选择一个; 没有干净划分时执行回退切分。
    """
    if len(rs) == 0:
        raise ValidationError("无法由空区域集合重建决策树")

    pieces: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    fallbacks = 0

    def build(lo: np.ndarray, hi: np.ndarray, dists: np.ndarray, box_lo: np.ndarray, box_hi: np.ndarray) -> Node:
        nonlocal fallbacks
        labels = np.argmax(dists, axis=1)
        if lo.shape[0] == 1 or np.all(labels == labels[0]):
            pieces.append((lo, hi, dists))
            return Leaf(tuple(float(p) for p in dists.mean(axis=0)))

        candidates = _clean_candidates(lo, hi, box_lo, box_hi)
        if candidates:
            d, v = candidates[int(rng.integers(len(candidates)))]
        else:
            d, v = _fallback_split(lo, hi, box_lo, box_hi)
            cut = (lo[:, d] < v) & (v < hi[:, d])
            fallbacks += 1
            logger.debug(f"重建回退切分: 特征 {d} <= {v}, 切开 {int(cut.sum())} 个区域")
            left_hi = hi[cut].copy()
            left_hi[:, d] = v
            right_lo = lo[cut].copy()
            right_lo[:, d] = v
            lo = np.concatenate([lo[~cut], lo[cut], right_lo])
            hi = np.concatenate([hi[~cut], left_hi, hi[cut]])
            dists = np.concatenate([dists[~cut], dists[cut], dists[cut]])

        go_left = hi[:, d] <= v
        go_right = lo[:, d] >= v
        left_box_hi = box_hi.copy()
        left_box_hi[d] = v
        right_box_lo = box_lo.copy()
        right_box_lo[d] = v
        return Split(
            d,
            v,
            build(lo[go_left], hi[go_left], dists[go_left], box_lo, left_box_hi),
            build(lo[go_right], hi[go_right], dists[go_right], right_box_lo, box_hi),
        )

    box_lo, box_hi = np.array(rs.domain_lower), np.array(rs.domain_upper)
    lo, hi, dists = _clip(rs, box_lo, box_hi)
    if lo.shape[0] == 0:
        raise ValidationError("区域集合与其定义域不相交")
    root = build(lo, hi, dists, box_lo, box_hi)

    post_split = RegionSet(
        lower=np.concatenate([p[0] for p in pieces]),
        upper=np.concatenate([p[1] for p in pieces]),
        distributions=np.concatenate([p[2] for p in pieces]),
        domain_lower=rs.domain_lower,
        domain_upper=rs.domain_upper,
    ).canonical()
    tree = DecisionTree(root=root, n_features=rs.k, n_classes=rs.n_classes)
    return Reconstruction(tree=tree, regions=post_split, fallback_splits=fallbacks)


def regions_to_tree(rs: RegionSet, rng: np.random.Generator) -> DecisionTree:
    return reconstruct(rs, rng).tree
