# 个体、适应度与种群

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Tuple

import numpy as np

from ..data import Dataset
from ..errors import ValidationError
from ..tree import DecisionTree, accuracy


class Fitness(NamedTuple):
    accuracy: float
    node_count: int


@dataclass(frozen=True, eq=False)
class Individual:
    """一棵候选树; 适应度在验证集上首次访问时计算并缓存"""

    tree: DecisionTree
    dataset: Dataset
    validation_indices: np.ndarray

    def __post_init__(self):
        indices = np.array(self.validation_indices, dtype=np.int64)
        indices.setflags(write=False)
        object.__setattr__(self, "validation_indices", indices)

    @cached_property
    def fitness(self) -> Fitness:
        return Fitness(accuracy(self.tree, self.dataset, self.validation_indices), self.tree.node_count)

    @property
    def sort_key(self) -> Tuple[float, int]:
        # 准确率高者在前, 相同时节点少者在前
        return (-self.fitness.accuracy, self.fitness.node_count)

    def with_tree(self, tree: DecisionTree) -> "Individual":
        return Individual(tree, self.dataset, self.validation_indices)


def fitness_order(a: Individual, b: Individual) -> int:
    """a 更优返回 -1, b 更优返回 1, 完全相同返回 0"""
    ka, kb = a.sort_key, b.sort_key
    if ka < kb:
        return -1
    if kb < ka:
        return 1
    return 0


def rank(individuals: Iterable[Individual]) -> Tuple[Individual, ...]:
    """按适应度稳定排序"""
    return tuple(sorted(individuals, key=lambda ind: ind.sort_key))


@dataclass(frozen=True)
class Population:
    """按适应度降序保存的个体集合"""

    individuals: Tuple[Individual, ...]
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError(f"种群规模至少为 1, 实际为 {self.size}")
        if len(self.individuals) > self.size:
            raise ValidationError(f"个体数 {len(self.individuals)} 超过种群规模 {self.size}")

    @classmethod
    def of(cls, individuals: Sequence[Individual], size: int) -> "Population":
        return cls(rank(individuals)[:size], size)

    def __len__(self) -> int:
        return len(self.individuals)

    def __getitem__(self, i: int) -> Individual:
        return self.individuals[i]

    @property
    def best(self) -> Individual:
        return self.individuals[0]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([ind.fitness.accuracy for ind in self.individuals]))
