# GENESIM 主循环: 由集成池初始化种群, 反复执行 选择 -> 合并重组 -> 变异 -> 截断替换

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from ..data import Dataset, split_half
from ..induce import EnsembleConfig, bag, build_population_pool
from ..seeding import derive_rng, derive_seed
from ..tree import DecisionTree
from .config import GAConfig
from .individual import Individual, Population
from .operators import mutate, recombine, replace, tournament_select


class TraceRow(NamedTuple):
    iteration: int
    best_accuracy: float
    best_node_count: int
    mean_accuracy: float


def _trace_row(iteration: int, population: Population) -> TraceRow:
    best = population.best.fitness
    return TraceRow(iteration, best.accuracy, best.node_count, population.mean_accuracy)


def write_trace_csv(trace: Sequence[TraceRow], path: Union[str, Path]) -> None:
    """把每轮的进化轨迹写成 CSV"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(list(trace), columns=list(TraceRow._fields)).to_csv(path, index=False)


def _initial_population(
    dataset: Dataset,
    grow: np.ndarray,
    validation: np.ndarray,
    config: GAConfig,
    ensemble_config: EnsembleConfig,
) -> Population:
    pool = build_population_pool(dataset, grow, ensemble_config.with_seed(derive_seed(config.seed, "induce")))
    individuals = [Individual(tree, dataset, validation) for tree in pool]

    # 集成池不足种群规模时, 用额外的 bagging 树补足
    bases = ensemble_config.base_configs
    r = 0
    while len(individuals) < config.population_size:
        base = bases[r % len(bases)]
        (tree,) = bag(dataset, grow, base, 1, derive_seed(config.seed, "fill", r))
        individuals.append(Individual(tree, dataset, validation))
        r += 1
    if r:
        logger.debug(f"集成池只有 {len(pool)} 棵树, 补充了 {r} 棵 bagging 树")
    elif len(individuals) > config.population_size:
        logger.debug(f"集成池有 {len(pool)} 棵树, 按适应度截断到 {config.population_size}")

    return Population.of(individuals, config.population_size)


def _offspring(
    population: Population,
    dataset: Dataset,
    validation: np.ndarray,
    ranges: np.ndarray,
    config: GAConfig,
    iteration: int,
    index: int,
) -> Individual:
    rng = derive_rng(config.seed, "offspring", iteration, index)
    first = tournament_select(population, rng, config.tournament_size)
    second = tournament_select(population, rng, config.tournament_size)
    child = recombine(first, second, dataset, validation, rng)
    child = mutate(child, dataset, rng, config.mutation_probability, ranges)
    child.fitness  # 在工作线程中完成评估
    return child


def run_genesim(
    dataset: Dataset,
    train_indices: Sequence[int],
    config: GAConfig,
    ensemble_config: EnsembleConfig,
    trace: Optional[List[TraceRow]] = None,
    jobs: int = 1,
) -> DecisionTree:
    """在训练索引上运行 GENESIM, 返回最终种群中最优个体的树

    训练索引被分层对半划分为生长集与验证集: 集成池在生长集上归纳, 适应度始终在同一个验证集上计算。
    结果只由 (数据, 索引, 配置, 种子) 决定, 与 jobs 无关。
    """
    grow, validation = split_half(dataset, train_indices, config.seed)
    # 变异阈值只从训练样本的取值范围中抽取
    ranges = dataset.value_ranges(train_indices)
    population = _initial_population(dataset, grow, validation, config, ensemble_config)
    if trace is not None:
        trace.append(_trace_row(0, population))

    executor = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for iteration in range(1, config.iterations + 1):
            indices = range(config.offspring_per_iteration)

            def produce(o: int, current: Population = population, it: int = iteration) -> Individual:
                return _offspring(current, dataset, validation, ranges, config, it, o)

            if executor is not None:
                offspring = list(executor.map(produce, indices))
            else:
                offspring = [produce(o) for o in indices]

            population = replace(population, offspring)
            row = _trace_row(iteration, population)
            if trace is not None:
                trace.append(row)
            logger.debug(
                f"🧬 第 {iteration}/{config.iterations} 轮: 最优 {row.best_accuracy:.4f} "
                f"({row.best_node_count} 节点), 平均 {row.mean_accuracy:.4f}"
            )
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    return population.best.tree
