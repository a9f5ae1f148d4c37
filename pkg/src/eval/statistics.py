# 配对 bootstrap 显著性检验与 Win-Tie-Loss 矩阵

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
from loguru import logger

from ..errors import ValidationError
from ..seeding import derive_rng, derive_seed

BOOTSTRAP_METHODS = ("studentized", "percentile")
WTL_METRICS = ("accuracy", "complexity")


def _studentized_p(d: np.ndarray, samples: np.ndarray) -> float:
    n = d.shape[0]
    mean = d.mean()
    se = d.std(ddof=1) / np.sqrt(n)
    # 差值全部相同 (且不为 0) 时观测统计量为无穷大
    t_obs = abs(mean) / se if se > 0 else np.inf

    centred = samples - mean
    m = centred.mean(axis=1)
    s = centred.std(axis=1, ddof=1) / np.sqrt(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(s > 0, np.abs(m) / s, np.where(m == 0, 0.0, np.inf))
    return float(np.mean(t >= t_obs))


def _percentile_p(samples: np.ndarray) -> float:
    m = samples.mean(axis=1)
    return float(min(1.0, 2.0 * min(np.mean(m <= 0), np.mean(m >= 0))))


def bootstrap_p(
    xs: Sequence[float],
    ys: Sequence[float],
    resamples: int = 10000,
    seed: int = 0,
    method: str = "studentized",
) -> float:
    """配对 bootstrap 双侧 p 值, 基于逐对差值 d = x - y

    studentized: 以零假设为中心的 bootstrap-t, p 为重采样 |t*| >= |t_obs| 的比例。
    percentile: 重采样均值落在零另一侧的比例乘 2, 截断到 1。
    两种方法在差值全为 0 时都返回 1.0, 交换 xs / ys 结果不变。
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValidationError(f"配对样本长度不一致: {xs.shape} vs {ys.shape}")
    if xs.shape[0] < 2:
        raise ValidationError("bootstrap 检验至少需要 2 对测量值")
    if resamples < 1:
        raise ValidationError(f"重采样次数至少为 1, 实际为 {resamples}")
    if method not in BOOTSTRAP_METHODS:
        raise ValidationError(f"未知的 bootstrap 方法 {method!r}, 可选: {', '.join(BOOTSTRAP_METHODS)}")

    d = xs - ys
    if np.all(d == 0):
        return 1.0

    rng = derive_rng(seed, "bootstrap")
    samples = d[rng.integers(d.shape[0], size=(resamples, d.shape[0]))]
    if method == "studentized":
        return _studentized_p(d, samples)
    return _percentile_p(samples)


class WTL(NamedTuple):
    wins: int
    ties: int
    losses: int


@dataclass
class WTLMatrix:
    """cells[(A, B)] 为 A 相对 B 在各数据集上的 (胜, 平, 负)"""

    metric: str
    algorithms: List[str]
    n_datasets: int
    cells: Dict[Tuple[str, str], WTL] = field(default_factory=dict)
    # 因结果缺失而按平局处理的 (数据集, A, B)
    flagged: List[Tuple[str, str, str]] = field(default_factory=list)

    def cell(self, a: str, b: str) -> WTL:
        return self.cells[(a, b)]

    def rows(self) -> List[Dict[str, object]]:
        return [
            {"metric": self.metric, "algorithm_a": a, "algorithm_b": b, **self.cells[(a, b)]._asdict()}
            for a in self.algorithms
            for b in self.algorithms
            if a != b
        ]


def build_wtl(
    report,
    alpha: float = 0.05,
    metric: str = "accuracy",
    resamples: int = 10000,
    method: str = "studentized",
) -> WTLMatrix:
    """由实验报告构造 Win-Tie-Loss 矩阵

    accuracy: 平均准确率更高且 p < alpha 者胜; complexity: 平均复杂度更低且 p < alpha 者胜。
    任一方结果缺失的 (数据集, 算法对) 记为平局并标记。
    """
    if metric not in WTL_METRICS:
        raise ValidationError(f"未知的 WTL 指标 {metric!r}, 可选: {', '.join(WTL_METRICS)}")
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha 应在 (0, 1) 之间, 实际为 {alpha}")

    algorithms = list(report.algorithms)
    counts = {(a, b): [0, 0, 0] for a in algorithms for b in algorithms}
    flagged: List[Tuple[str, str, str]] = []

    for d_idx, dataset in enumerate(report.datasets):
        for a in algorithms:
            counts[(a, a)][1] += 1
        for i, a in enumerate(algorithms):
            for j in range(i + 1, len(algorithms)):
                b = algorithms[j]
                cell_a, cell_b = report.cell(dataset, a), report.cell(dataset, b)
                if cell_a is None or cell_b is None or not cell_a.complete or not cell_b.complete:
                    flagged.append((dataset, a, b))
                    counts[(a, b)][1] += 1
                    counts[(b, a)][1] += 1
                    continue

                xs, ys = cell_a.measurements(metric), cell_b.measurements(metric)
                # 每个无序对只检验一次, 种子与方向无关
                p = bootstrap_p(xs, ys, resamples, derive_seed(report.seed, d_idx, i, j), method)
                diff = float(np.mean(xs) - np.mean(ys))
                if metric == "complexity":
                    diff = -diff
                if diff > 0 and p < alpha:
                    counts[(a, b)][0] += 1
                    counts[(b, a)][2] += 1
                elif diff < 0 and p < alpha:
                    counts[(a, b)][2] += 1
                    counts[(b, a)][0] += 1
                else:
                    counts[(a, b)][1] += 1
                    counts[(b, a)][1] += 1

    if flagged:
        logger.warning(f"⚠️ {len(flagged)} 个 (数据集, 算法对) 因结果缺失按平局计")
    return WTLMatrix(
        metric=metric,
        algorithms=algorithms,
        n_datasets=len(report.datasets),
        cells={key: WTL(*value) for key, value in counts.items()},
        flagged=flagged,
    )
