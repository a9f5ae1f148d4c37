# 实验管理器: 重复分层交叉验证, 调度 (数据集, 算法, 重复) 单元并汇总结果

import asyncio
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import orjson
import yaml
from loguru import logger

from ..algorithms import AlgorithmSpec, BaseAlgorithm, create_algorithm
from ..data import Dataset, FoldPlan, load_csv, make_folds
from ..errors import ConfigError, ParseError, ValidationError
from ..seeding import derive_seed

# ---------------------------------------------------------------------------
# 实验配置
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    csv: str
    label: Optional[str] = None
    manifest: Optional[str] = None
    feature_kinds: Optional[Dict[str, str]] = None

    def load(self) -> Dataset:
        return load_csv(
            self.csv,
            label_column=self.label,
            feature_kinds=self.feature_kinds,
            manifest=self.manifest,
            name=self.name,
        )


def _resolve(base: Path, value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    path = Path(value)
    return str(path if path.is_absolute() else base / path)


@dataclass(frozen=True)
class ExperimentConfig:
    """benchmark 配置: 数据集、算法、折数、重复次数、种子与输出目录"""

    datasets: Tuple[DatasetEntry, ...]
    algorithms: Tuple[AlgorithmSpec, ...]
    n_folds: int = 3
    n_repeats: int = 10
    seed: int = 0
    output_dir: str = "results"
    bootstrap_resamples: int = 10000
    alpha: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.datasets:
            raise ConfigError("实验配置至少需要一个数据集")
        if not self.algorithms:
            raise ConfigError("实验配置至少需要一个算法")
        for what, names in (
            ("数据集", [d.name for d in self.datasets]),
            ("算法", [a.name for a in self.algorithms]),
        ):
            duplicates = sorted({n for n in names if names.count(n) > 1})
            if duplicates:
                raise ConfigError(f"{what}名称重复: {', '.join(duplicates)}")
        for name, value, minimum in (
            ("n_folds", self.n_folds, 2),
            ("n_repeats", self.n_repeats, 1),
            ("seed", self.seed, 0),
            ("bootstrap_resamples", self.bootstrap_resamples, 1),
        ):
            if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
                raise ConfigError(f"{name} 应为 >= {minimum} 的整数, 实际为 {value!r}")
        if isinstance(self.alpha, bool) or not isinstance(self.alpha, (int, float)) or not 0 < self.alpha < 1:
            raise ConfigError(f"alpha 应在 (0, 1) 之间, 实际为 {self.alpha!r}")

    def check_files(self) -> None:
        """在任何计算开始前确认引用的文件都存在"""
        for entry in self.datasets:
            for path in (entry.csv, entry.manifest):
                if path is not None and not os.path.isfile(path):
                    raise ConfigError(f"数据集 {entry.name} 引用的文件不存在: {path}")

    @classmethod
    def from_dict(
        cls,
        raw: Dict[str, Any],
        base_dir: Optional[Path] = None,
        defaults: Optional[Dict[str, Any]] = None,
    ) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("实验配置顶层应为映射")
        known = {"datasets", "algorithms", "n_folds", "n_repeats", "seed", "output_dir", "bootstrap_resamples", "alpha"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"实验配置不支持的字段: {', '.join(sorted(unknown))}")
        base = base_dir or Path(".")
        defaults = defaults or {}

        datasets = []
        for item in raw.get("datasets") or []:
            if not isinstance(item, dict) or "name" not in item or "csv" not in item:
                raise ConfigError(f"数据集配置需要 name 与 csv 字段: {item!r}")
            extra = set(item) - {"name", "csv", "label", "manifest", "feature_kinds"}
            if extra:
                raise ConfigError(f"数据集配置不支持的字段: {', '.join(sorted(extra))}")
            datasets.append(
                DatasetEntry(
                    name=item["name"],
                    csv=_resolve(base, item["csv"]),
                    label=item.get("label"),
                    manifest=_resolve(base, item.get("manifest")),
                    feature_kinds=item.get("feature_kinds"),
                )
            )
        algorithms = [AlgorithmSpec.from_dict(a) for a in raw.get("algorithms") or []]

        values = {k: raw[k] for k in ("n_folds", "n_repeats", "seed", "bootstrap_resamples", "alpha") if k in raw}
        for k, v in defaults.items():
            values.setdefault(k, v)
        output_dir = _resolve(base, raw.get("output_dir", "results"))
        return cls(datasets=tuple(datasets), algorithms=tuple(algorithms), output_dir=output_dir, **values)

    @classmethod
    def from_file(cls, path: str, defaults: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """读取 JSON 或 YAML (按后缀) 实验配置; 相对路径相对于配置文件所在目录"""
        if not os.path.isfile(path):
            raise ConfigError(f"实验配置文件不存在: {path}")
        try:
            with open(path, "rb") as f:
                content = f.read()
            if path.endswith((".yaml", ".yml")):
                raw = yaml.safe_load(content)
            else:
                raw = orjson.loads(content)
        except (orjson.JSONDecodeError, yaml.YAMLError) as e:
            raise ParseError(f"无法解析实验配置 {path}: {e}") from e
        return cls.from_dict(raw, Path(path).resolve().parent, defaults)


# ---------------------------------------------------------------------------
# 实验报告
# ---------------------------------------------------------------------------


def _mean_std(values: Sequence[float]) -> Tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    return float(np.mean(values)), float(np.std(values))


@dataclass
class CellResult:
    """一个 (数据集, 算法) 单元: 每次重复的折平均准确率与复杂度"""

    dataset: str
    algorithm: str
    n_repeats: int
    accuracies: List[float] = field(default_factory=list)
    complexities: List[float] = field(default_factory=list)
    fold_fingerprints: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.errors and len(self.accuracies) == self.n_repeats

    def measurements(self, metric: str) -> np.ndarray:
        return np.asarray(self.accuracies if metric == "accuracy" else self.complexities, dtype=float)

    @property
    def accuracy_summary(self) -> Tuple[Optional[float], Optional[float]]:
        return _mean_std(self.accuracies)

    @property
    def complexity_summary(self) -> Tuple[Optional[float], Optional[float]]:
        return _mean_std(self.complexities)

    def to_dict(self) -> Dict[str, Any]:
        acc_mean, acc_std = self.accuracy_summary
        cx_mean, cx_std = self.complexity_summary
        return {
            "dataset": self.dataset,
            "algorithm": self.algorithm,
            "accuracies": self.accuracies,
            "complexities": self.complexities,
            "accuracy_mean": acc_mean,
            "accuracy_std": acc_std,
            "complexity_mean": cx_mean,
            "complexity_std": cx_std,
            "fold_fingerprints": self.fold_fingerprints,
            "errors": self.errors,
        }


@dataclass
class ExperimentReport:
    datasets: List[str]
    algorithms: List[str]
    n_folds: int
    n_repeats: int
    seed: int
    cells: Dict[Tuple[str, str], CellResult] = field(default_factory=dict)
    algorithm_specs: List[Dict[str, Any]] = field(default_factory=list)

    def cell(self, dataset: str, algorithm: str) -> Optional[CellResult]:
        return self.cells.get((dataset, algorithm))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "n_folds": self.n_folds,
            "n_repeats": self.n_repeats,
            "datasets": self.datasets,
            "algorithms": self.algorithm_specs or [{"name": a} for a in self.algorithms],
            "cells": [
                self.cells[(d, a)].to_dict() for d in self.datasets for a in self.algorithms if (d, a) in self.cells
            ],
        }


# ---------------------------------------------------------------------------
# 执行
# ---------------------------------------------------------------------------

ProgressCallback = Callable[[int, int, str, str, int, Optional[str]], None]


@dataclass(frozen=True)
class _Job:
    d_idx: int
    dataset: Dataset
    plan: FoldPlan
    algorithm: BaseAlgorithm
    repeat: int


def _run_job(job: _Job, seed: int) -> Tuple[float, float, str]:
    """在一次重复的所有折上训练与测试, 返回 (平均准确率, 平均复杂度, 划分指纹)"""
    accuracies, complexities = [], []
    for fold in range(job.plan.n_folds):
        train, test = job.plan.split(job.repeat, fold)
        model = job.algorithm.fit(job.dataset, train, derive_seed(seed, "cell", job.d_idx, job.repeat, fold))
        predictions = model.predict(job.dataset.rows[test])
        accuracies.append(float(np.mean(predictions == job.dataset.labels[test])))
        complexities.append(float(model.complexity))
    return float(np.mean(accuracies)), float(np.mean(complexities)), job.plan.fingerprint(job.repeat)


async def run_experiment_async(
    datasets: Sequence[Dataset],
    algorithms: Sequence[AlgorithmSpec],
    n_folds: int,
    n_repeats: int,
    seed: int,
    jobs: int = 1,
    progress: Optional[ProgressCallback] = None,
    settings: Optional[Dict[str, Any]] = None,
) -> ExperimentReport:
    names = [d.name for d in datasets]
    if len(set(names)) != len(names):
        raise ValidationError(f"数据集名称重复: {names}")
    algo_names = [a.name for a in algorithms]
    if len(set(algo_names)) != len(algo_names):
        raise ValidationError(f"算法名称重复: {algo_names}")
    if jobs < 1:
        raise ValidationError(f"并发数至少为 1, 实际为 {jobs}")

    # 先完成所有校验 (算法参数、分层条件), 再开始计算
    instances = [create_algorithm(spec, settings) for spec in algorithms]
    plans = [make_folds(d, n_folds, n_repeats, seed) for d in datasets]

    work = [
        _Job(d_idx, dataset, plans[d_idx], algorithm, repeat)
        for d_idx, dataset in enumerate(datasets)
        for algorithm in instances
        for repeat in range(n_repeats)
    ]
    total = len(work)
    logger.info(f"🚀 开始实验: {len(datasets)} 个数据集 x {len(instances)} 个算法 x {n_repeats} 次重复 ({n_folds} 折)")

    semaphore = asyncio.Semaphore(jobs)
    done = 0

    async def run_one(job: _Job):
        nonlocal done
        async with semaphore:
            try:
                return await asyncio.to_thread(_run_job, job, seed)
            finally:
                done += 1

    async def tracked(job: _Job):
        try:
            result = await run_one(job)
        except Exception as e:
            message = f"{type(e).__name__}: {e}"
            logger.error(f"❌ [{done}/{total}] {job.dataset.name} / {job.algorithm.name} 第 {job.repeat + 1} 次重复失败: {message}")
            if progress:
                progress(done, total, job.dataset.name, job.algorithm.name, job.repeat, message)
            raise
        logger.info(
            f"✅ [{done}/{total}] {job.dataset.name} / {job.algorithm.name} 第 {job.repeat + 1} 次重复: "
            f"准确率 {result[0]:.4f}, 复杂度 {result[1]:.1f}"
        )
        if progress:
            progress(done, total, job.dataset.name, job.algorithm.name, job.repeat, None)
        return result

    results = await asyncio.gather(*(tracked(job) for job in work), return_exceptions=True)

    report = ExperimentReport(
        datasets=names,
        algorithms=algo_names,
        n_folds=n_folds,
        n_repeats=n_repeats,
        seed=seed,
        algorithm_specs=[{"name": s.name, "kind": s.kind.value, "parameters": s.parameters} for s in algorithms],
    )
    for d in datasets:
        for a in instances:
            report.cells[(d.name, a.name)] = CellResult(d.name, a.name, n_repeats)

    # gather 保持提交顺序, 因此每个单元内的测量值按重复编号排列
    for job, result in zip(work, results):
        cell = report.cells[(job.dataset.name, job.algorithm.name)]
        if isinstance(result, BaseException):
            cell.errors.append(f"repeat {job.repeat}: {type(result).__name__}: {result}")
            continue
        accuracy, complexity, fingerprint = result
        cell.accuracies.append(accuracy)
        cell.complexities.append(complexity)
        cell.fold_fingerprints.append(fingerprint)

    failed = sum(1 for c in report.cells.values() if c.errors)
    if failed:
        logger.warning(f"⚠️ {failed} 个单元存在失败的重复")
    logger.info("🎉 实验完成")
    return report


def run_experiment(
    datasets: Sequence[Dataset],
    algorithms: Sequence[AlgorithmSpec],
    n_folds: int,
    n_repeats: int,
    seed: int,
    jobs: int = 1,
    progress: Optional[ProgressCallback] = None,
    settings: Optional[Dict[str, Any]] = None,
) -> ExperimentReport:
    """重复分层 k 折交叉验证; 同一次重复中所有算法使用同一划分"""
    return asyncio.run(
        run_experiment_async(datasets, algorithms, n_folds, n_repeats, seed, jobs, progress, settings)
    )


def load_report(path: str) -> Dict[str, Any]:
    """读取 results.json (供报告查看页面使用)"""
    with open(path, "rb") as f:
        return orjson.loads(f.read())
