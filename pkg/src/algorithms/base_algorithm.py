# 参与对比实验的算法: 统一的 fit -> 模型 (predict / complexity) 接口

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Type

import numpy as np
from loguru import logger

from ..data import Dataset
from ..errors import ConfigError
from ..genetic import GAConfig, run_genesim
from ..induce import EnsembleConfig, InduceConfig, adaboost, bag, induce_tree
from ..settings import DEFAULT_SETTINGS
from ..tree import DecisionTree, predict_many, predict_proba


class AlgorithmKind(str, Enum):
    SINGLE_TREE = "single_tree"
    BAGGED_COMMITTEE = "bagged_committee"
    BOOSTED_COMMITTEE = "boosted_committee"
    GENESIM = "genesim"
    MAJORITY = "majority"

    @classmethod
    def parse(cls, value: Any) -> "AlgorithmKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ConfigError(f"未知的算法类型 {value!r}, 可选: {valid}") from None


@dataclass(frozen=True)
class AlgorithmSpec:
    """实验中的一个算法: 名称 (实验内唯一)、类型与参数"""

    name: str
    kind: AlgorithmKind
    parameters: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ConfigError(f"算法名称必须是非空字符串, 实际为 {self.name!r}")
        object.__setattr__(self, "kind", AlgorithmKind.parse(self.kind))
        if not isinstance(self.parameters, dict):
            raise ConfigError(f"算法 {self.name} 的 parameters 应为映射")

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "AlgorithmSpec":
        if not isinstance(raw, dict) or "name" not in raw or "kind" not in raw:
            raise ConfigError(f"算法配置需要 name 与 kind 字段: {raw!r}")
        unknown = set(raw) - {"name", "kind", "parameters"}
        if unknown:
            raise ConfigError(f"算法配置不支持的字段: {', '.join(sorted(unknown))}")
        return cls(raw["name"], raw["kind"], dict(raw.get("parameters") or {}))


# ---------------------------------------------------------------------------
# 训练得到的模型
# ---------------------------------------------------------------------------


class TreeModel:
    def __init__(self, tree: DecisionTree):
        self.tree = tree

    def predict(self, rows: np.ndarray) -> np.ndarray:
        return predict_many(self.tree, rows)

    @property
    def complexity(self) -> int:
        return self.tree.node_count


class CommitteeModel:
    """多棵树的投票委员会; weights 为 None 时按平均分布软投票, 否则按权重对预测类别硬投票"""

    def __init__(self, trees: List[DecisionTree], n_classes: int, weights: Optional[Sequence[float]] = None):
        self.trees = trees
        self.n_classes = n_classes
        self.weights = None if weights is None else np.asarray(weights, dtype=float)

    def predict(self, rows: np.ndarray) -> np.ndarray:
        if self.weights is None:
            votes = np.mean([predict_proba(t, rows) for t in self.trees], axis=0)
        else:
            votes = np.zeros((rows.shape[0], self.n_classes))
            for tree, weight in zip(self.trees, self.weights):
                votes[np.arange(rows.shape[0]), predict_many(tree, rows)] += weight
        return np.argmax(votes, axis=1)

    @property
    def complexity(self) -> int:
        # 委员会的复杂度按树的数量计
        return len(self.trees)


class MajorityModel:
    def __init__(self, label: int):
        self.label = label

    def predict(self, rows: np.ndarray) -> np.ndarray:
        return np.full(rows.shape[0], self.label, dtype=np.int64)

    @property
    def complexity(self) -> int:
        return 1


# ---------------------------------------------------------------------------
# 算法
# ---------------------------------------------------------------------------


def _section(settings: Optional[Dict[str, Any]], name: str) -> Dict[str, Any]:
    return dict((settings or DEFAULT_SETTINGS).get(name) or DEFAULT_SETTINGS[name])


def _take(parameters: Dict[str, Any], keys: Sequence[str]) -> Dict[str, Any]:
    return {k: parameters[k] for k in keys if k in parameters}


def _reject_unknown(name: str, parameters: Dict[str, Any], allowed: Sequence[str]) -> None:
    unknown = set(parameters) - set(allowed)
    if unknown:
        raise ConfigError(f"算法 {name} 不支持的参数: {', '.join(sorted(unknown))}")


_INDUCE_KEYS = ("criterion", "max_depth", "min_samples_leaf", "min_samples_split")


class BaseAlgorithm:
    """算法基类, 构造时即校验参数, 子类实现 fit"""

    kind: AlgorithmKind

    def __init__(self, spec: AlgorithmSpec, settings: Optional[Dict[str, Any]] = None):
        self.name = spec.name
        self.spec = spec
        self.settings = settings
        self.configure(dict(spec.parameters))

    def configure(self, parameters: Dict[str, Any]) -> None:
        _reject_unknown(self.name, parameters, ())

    def fit(self, dataset: Dataset, train_indices: Sequence[int], seed: int):
        raise NotImplementedError

    def get_status(self) -> Dict[str, Any]:
        return {"name": self.name, "kind": self.kind.value, "parameters": dict(self.spec.parameters)}


class SingleTreeAlgorithm(BaseAlgorithm):
    kind = AlgorithmKind.SINGLE_TREE

    def configure(self, parameters):
        _reject_unknown(self.name, parameters, _INDUCE_KEYS)
        self.config = InduceConfig.from_dict({**_section(self.settings, "induce"), **parameters})

    def fit(self, dataset, train_indices, seed):
        return TreeModel(induce_tree(dataset, train_indices, self.config.with_seed(seed)))


class BaggedCommitteeAlgorithm(BaseAlgorithm):
    kind = AlgorithmKind.BAGGED_COMMITTEE

    def configure(self, parameters):
        _reject_unknown(self.name, parameters, _INDUCE_KEYS + ("rounds",))
        self.rounds = parameters.pop("rounds", _section(self.settings, "ensemble")["bagging_rounds"])
        if not isinstance(self.rounds, int) or isinstance(self.rounds, bool) or self.rounds < 1:
            raise ConfigError(f"算法 {self.name} 的 rounds 应为正整数, 实际为 {self.rounds!r}")
        self.config = InduceConfig.from_dict({**_section(self.settings, "induce"), **parameters})

    def fit(self, dataset, train_indices, seed):
        trees = bag(dataset, train_indices, self.config, self.rounds, seed)
        return CommitteeModel(trees, dataset.n_classes)


class BoostedCommitteeAlgorithm(BaseAlgorithm):
    kind = AlgorithmKind.BOOSTED_COMMITTEE

    def configure(self, parameters):
        _reject_unknown(self.name, parameters, ("rounds", "max_depth", "criterion"))
        ensemble = _section(self.settings, "ensemble")
        self.rounds = parameters.get("rounds", ensemble["boosting_rounds"])
        self.max_depth = parameters.get("max_depth", ensemble["boost_max_depth"])
        # 借用 InduceConfig 的校验
        InduceConfig(max_depth=self.max_depth)
        self.criterion = InduceConfig(criterion=parameters.get("criterion", "gini")).criterion
        if not isinstance(self.rounds, int) or isinstance(self.rounds, bool) or self.rounds < 1:
            raise ConfigError(f"算法 {self.name} 的 rounds 应为正整数, 实际为 {self.rounds!r}")

    def fit(self, dataset, train_indices, seed):
        members = adaboost(dataset, train_indices, self.rounds, self.max_depth, seed, criterion=self.criterion)
        if not members:
            # 第一轮误差就过大时退化为单棵浅树
            logger.debug(f"{self.name}: boosting 没有保留任何一轮, 退化为单棵树")
            config = InduceConfig(criterion=self.criterion, max_depth=self.max_depth, seed=seed)
            return CommitteeModel([induce_tree(dataset, train_indices, config)], dataset.n_classes, [1.0])
        trees, alphas = zip(*members)
        return CommitteeModel(list(trees), dataset.n_classes, alphas)


class GenesimAlgorithm(BaseAlgorithm):
    kind = AlgorithmKind.GENESIM

    _GA_KEYS = ("population_size", "iterations", "tournament_size", "offspring_per_iteration", "mutation_probability")

    def configure(self, parameters):
        _reject_unknown(self.name, parameters, self._GA_KEYS + ("ensemble", "jobs"))
        ensemble_raw = {**_section(self.settings, "ensemble"), **(parameters.get("ensemble") or {})}
        self.ensemble_config = EnsembleConfig.from_dict(ensemble_raw, _section(self.settings, "induce"))
        self.ga_config = GAConfig.from_dict({**_section(self.settings, "genetic"), **_take(parameters, self._GA_KEYS)})
        self.jobs = parameters.get("jobs", 1)
        if not isinstance(self.jobs, int) or isinstance(self.jobs, bool) or self.jobs < 1:
            raise ConfigError(f"算法 {self.name} 的 jobs 应为正整数, 实际为 {self.jobs!r}")

    def fit(self, dataset, train_indices, seed):
        tree = run_genesim(dataset, train_indices, self.ga_config.with_seed(seed), self.ensemble_config, jobs=self.jobs)
        return TreeModel(tree)


class MajorityAlgorithm(BaseAlgorithm):
    kind = AlgorithmKind.MAJORITY

    def fit(self, dataset, train_indices, seed):
        counts = dataset.class_counts(train_indices)
        return MajorityModel(int(np.argmax(counts)))


ALGORITHMS: Dict[AlgorithmKind, Type[BaseAlgorithm]] = {
    cls.kind: cls
    for cls in (
        SingleTreeAlgorithm,
        BaggedCommitteeAlgorithm,
        BoostedCommitteeAlgorithm,
        GenesimAlgorithm,
        MajorityAlgorithm,
    )
}


def create_algorithm(spec: AlgorithmSpec, settings: Optional[Dict[str, Any]] = None) -> BaseAlgorithm:
    """按类型实例化算法; 参数错误在此时以 ConfigError 抛出"""
    return ALGORITHMS[spec.kind](spec, settings)
