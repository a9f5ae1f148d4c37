# 集成生成: bagging、AdaBoost.M1 以及 GA 初始种群池

import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..data import Dataset
from ..errors import ValidationError
from ..seeding import derive_rng, derive_seed
from ..tree import DecisionTree, predict_many
from .config import Criterion, EnsembleConfig, InduceConfig
from .inducer import induce_tree

# 误差为 0 时权重取有限值
_MIN_ERROR = 1e-10


def bag(
    dataset: Dataset, indices: Sequence[int], config: InduceConfig, rounds: int, seed: int
) -> List[DecisionTree]:
    """每轮有放回地抽取 |indices| 个样本并归纳一棵树"""
    if rounds < 1:
        raise ValidationError(f"bagging 轮数至少为 1, 实际为 {rounds}")
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise ValidationError("bagging 需要非空的样本索引")

    trees = []
    for r in range(rounds):
        rng = derive_rng(seed, "bag", r)
        sample = rng.choice(indices, size=indices.size, replace=True)
        trees.append(induce_tree(dataset, sample, config.with_seed(derive_seed(seed, "induce", r))))
    return trees


def adaboost(
    dataset: Dataset,
    indices: Sequence[int],
    rounds: int,
    max_depth: int,
    seed: int,
    criterion: Criterion = Criterion.GINI,
    on_round: Optional[Callable[[int, np.ndarray], None]] = None,
) -> List[Tuple[DecisionTree, float]]:
    """AdaBoost.M1 (多类, 按权重重采样), 返回 [(树, 投票权重)]

    每轮的加权误差 eps >= 1 - 1/C 时停止且不保留该轮的树; eps = 0 时保留该树后停止。
    误分类样本的权重乘以 (1 - eps) * (C - 1) / eps 后重新归一化。
    """
    if rounds < 1:
        raise ValidationError(f"boosting 轮数至少为 1, 实际为 {rounds}")
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise ValidationError("boosting 需要非空的样本索引")

    n_classes = dataset.n_classes
    labels = dataset.labels[indices]
    weights = np.full(indices.size, 1.0 / indices.size)
    members: List[Tuple[DecisionTree, float]] = []

    for r in range(rounds):
        rng = derive_rng(seed, "boost", r)
        sample = rng.choice(indices, size=indices.size, replace=True, p=weights)
        config = InduceConfig(
            criterion=criterion,
            max_depth=max_depth,
            min_samples_leaf=1,
            min_samples_split=2,
            seed=derive_seed(seed, "induce", r),
        )
        tree = induce_tree(dataset, sample, config)

        wrong = predict_many(tree, dataset.rows[indices]) != labels
        error = float(weights[wrong].sum())
        if error >= 1.0 - 1.0 / n_classes:
            logger.debug(f"boosting 第 {r + 1} 轮误差 {error:.4f} 过大, 提前停止")
            break

        alpha = math.log((1.0 - max(error, _MIN_ERROR)) / max(error, _MIN_ERROR)) + math.log(n_classes - 1)
        members.append((tree, alpha))
        if error == 0.0:
            break

        weights[wrong] *= (1.0 - error) * (n_classes - 1) / error
        weights /= weights.sum()
        if on_round is not None:
            on_round(r, weights.copy())

    return members


def boost(
    dataset: Dataset,
    indices: Sequence[int],
    rounds: int,
    max_depth: int,
    seed: int,
    criterion: Criterion = Criterion.GINI,
    on_round: Optional[Callable[[int, np.ndarray], None]] = None,
) -> List[DecisionTree]:
    """AdaBoost.M1 各轮的树 (GA 把它们当作独立个体使用, 不做加权投票)"""
    return [tree for tree, _ in adaboost(dataset, indices, rounds, max_depth, seed, criterion, on_round)]


def build_population_pool(dataset: Dataset, indices: Sequence[int], config: EnsembleConfig) -> List[DecisionTree]:
    """按基础配置依次生成: 普通树、bagging 树、boosting 树, 拼接为初始种群池"""
    pool: List[DecisionTree] = []
    for i, base in enumerate(config.base_configs):
        pool.append(induce_tree(dataset, indices, base.with_seed(derive_seed(config.seed, "induce", i))))
        if config.bagging_rounds > 0:
            pool.extend(bag(dataset, indices, base, config.bagging_rounds, derive_seed(config.seed, "bag", i)))
        if config.boosting_rounds > 0:
            pool.extend(
                boost(
                    dataset,
                    indices,
                    config.boosting_rounds,
                    config.boost_max_depth,
                    derive_seed(config.seed, "boost", i),
                    criterion=base.criterion,
                )
            )

    if not pool:
        raise ValidationError("集成配置没有生成任何决策树")
    logger.debug(f"🌲 集成池生成完成: {len(pool)} 棵树")
    return pool
