# 遗传算子: 锦标赛选择、决策空间合并重组、变异与截断替换

from typing import List, Optional, Sequence

import numpy as np

from ..data import Dataset
from ..space import merge_regions, regions_to_tree, tree_to_regions
from ..tree import (
    DecisionTree,
    Split,
    is_ancestor,
    list_internal_nodes,
    list_subtree_roots,
    replace_subtree,
    subtree_at,
    swap_subtrees,
)
from .individual import Individual, Population

THRESHOLD_MUTATION = 0
SWAP_MUTATION = 1


def tournament_select(population: Population, rng: np.random.Generator, tournament_size: int) -> Individual:
    """有放回地抽取 tournament_size 个个体, 返回其中最优者 (完全并列时先抽到者胜)"""
    draws = rng.integers(len(population), size=tournament_size)
    winner = population[int(draws[0])]
    for i in draws[1:]:
        contender = population[int(i)]
        if contender.sort_key < winner.sort_key:
            winner = contender
    return winner


def recombine(
    first: Individual,
    second: Individual,
    dataset: Dataset,
    validation_indices: Sequence[int],
    rng: np.random.Generator,
) -> Individual:
    """两棵树转为决策空间, 求交后随机重建为一棵新树"""
    k = dataset.n_features
    merged = merge_regions(tree_to_regions(first.tree, k), tree_to_regions(second.tree, k))
    return Individual(regions_to_tree(merged, rng), dataset, validation_indices)


def _mutate_threshold(tree: DecisionTree, ranges: np.ndarray, rng: np.random.Generator) -> DecisionTree:
    internal = list_internal_nodes(tree)
    if not internal:
        return tree
    handle = internal[int(rng.integers(len(internal)))]
    node = subtree_at(tree, handle)
    low, high = ranges[node.feature]
    threshold = float(rng.uniform(low, high))
    return replace_subtree(tree, handle, Split(node.feature, threshold, node.left, node.right))


def _mutate_swap(tree: DecisionTree, ranges: np.ndarray, rng: np.random.Generator) -> DecisionTree:
    roots = list_subtree_roots(tree)
    pairs = [
        (a, b)
        for i, a in enumerate(roots)
        for b in roots[i + 1 :]
        if not is_ancestor(a, b) and not is_ancestor(b, a)
    ]
    if not pairs:
        return _mutate_threshold(tree, ranges, rng)
    first, second = pairs[int(rng.integers(len(pairs)))]
    return swap_subtrees(tree, first, second)


def mutate(
    individual: Individual,
    dataset: Dataset,
    rng: np.random.Generator,
    p: float,
    ranges: Optional[np.ndarray] = None,
) -> Individual:
    """以概率 p 施加一次变异 (阈值替换或子树交换, 各占一半)

    新阈值在 ranges[特征] 内均匀抽取; ranges 为 None 时使用整份数据的 observed_range。
    交叉验证中应传入只在训练样本上统计的范围 (Dataset.value_ranges)。
    """
    if rng.random() >= p:
        return individual
    if ranges is None:
        ranges = dataset.value_ranges()
    if int(rng.integers(2)) == THRESHOLD_MUTATION:
        tree = _mutate_threshold(individual.tree, ranges, rng)
    else:
        tree = _mutate_swap(individual.tree, ranges, rng)
    if tree is individual.tree:
        return individual
    return individual.with_tree(tree)


def replace(population: Population, offspring: List[Individual]) -> Population:
    """父代与后代合并后按适应度排序, 截断到种群规模"""
    return Population.of(list(population.individuals) + list(offspring), population.size)
