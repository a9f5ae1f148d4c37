# 决策树归纳与集成生成的配置

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from ..errors import ConfigError


class Criterion(str, Enum):
    GINI = "gini"
    ENTROPY = "entropy"

    @classmethod
    def parse(cls, value: Any) -> "Criterion":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise ConfigError(f"未知的划分准则 {value!r}, 可选: {valid}") from None


def _require_int(name: str, value: Any, minimum: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{name} 应为 >= {minimum} 的整数, 实际为 {value!r}")


@dataclass(frozen=True)
class InduceConfig:
    """贪心归纳参数

    默认值面向小数据集: 不限深度, 叶节点至少 2 个样本, 节点至少 4 个样本才继续划分。
    seed 决定同等增益的划分之间如何取舍。
    """

    criterion: Criterion = Criterion.GINI
    max_depth: Optional[int] = None
    min_samples_leaf: int = 2
    min_samples_split: int = 4
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "criterion", Criterion.parse(self.criterion))
        if self.max_depth is not None:
            _require_int("max_depth", self.max_depth, 1)
        _require_int("min_samples_leaf", self.min_samples_leaf, 1)
        _require_int("min_samples_split", self.min_samples_split, 2)
        _require_int("seed", self.seed, 0)

    def with_seed(self, seed: int) -> "InduceConfig":
        return replace(self, seed=seed)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "InduceConfig":
        known = {"criterion", "max_depth", "min_samples_leaf", "min_samples_split", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"InduceConfig 不支持的参数: {', '.join(sorted(unknown))}")
        return cls(**raw)


def _default_bases() -> Tuple[InduceConfig, ...]:
    return (InduceConfig(Criterion.GINI), InduceConfig(Criterion.ENTROPY))


@dataclass(frozen=True)
class EnsembleConfig:
    """初始种群 (集成池) 的构成

    每个基础配置贡献: 1 棵普通树 + bagging_rounds 棵 bagging 树 + 至多 boosting_rounds 棵 boosting 树。
    默认 2 x (1 + 10) + 2 x 5 = 32 棵。
    """

    bagging_rounds: int = 10
    boosting_rounds: int = 5
    boost_max_depth: int = 3
    base_configs: Tuple[InduceConfig, ...] = field(default_factory=_default_bases)
    seed: int = 0

    def __post_init__(self):
        _require_int("bagging_rounds", self.bagging_rounds, 0)
        _require_int("boosting_rounds", self.boosting_rounds, 0)
        _require_int("boost_max_depth", self.boost_max_depth, 1)
        _require_int("seed", self.seed, 0)
        object.__setattr__(self, "base_configs", tuple(self.base_configs))
        if not self.base_configs:
            raise ConfigError("EnsembleConfig 至少需要一个基础归纳配置")

    @property
    def max_pool_size(self) -> int:
        # boosting 可能提前停止, 因此这是上界
        return len(self.base_configs) * (1 + self.bagging_rounds + self.boosting_rounds)

    def with_seed(self, seed: int) -> "EnsembleConfig":
        return replace(self, seed=seed)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any], induce_defaults: Optional[Dict[str, Any]] = None) -> "EnsembleConfig":
        """由配置映射构造; criteria 列表展开为基础配置"""
        raw = dict(raw)
        criteria = raw.pop("criteria", None)
        bases = raw.pop("base_configs", None)
        base_defaults = {k: v for k, v in (induce_defaults or {}).items() if k != "criterion"}
        if bases is not None:
            raw["base_configs"] = tuple(InduceConfig.from_dict({**base_defaults, **b}) for b in bases)
        elif criteria is not None:
            raw["base_configs"] = tuple(InduceConfig.from_dict({**base_defaults, "criterion": c}) for c in criteria)
        known = {"bagging_rounds", "boosting_rounds", "boost_max_depth", "base_configs", "seed"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"EnsembleConfig 不支持的参数: {', '.join(sorted(unknown))}")
        return cls(**raw)
