# 遗传算法参数

from dataclasses import dataclass, replace
from typing import Any, Dict

from ..errors import ConfigError


def _require_int(name: str, value: Any, minimum: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{name} 应为 >= {minimum} 的整数, 实际为 {value!r}")


@dataclass(frozen=True)
class GAConfig:
    """GENESIM 主循环参数

    Attributes:
        population_size: 每轮替换后保留的个体数 (>= 2)
        iterations: 迭代轮数 (>= 1)
        tournament_size: 锦标赛规模, 有放回抽取 (>= 2)
        offspring_per_iteration: 每轮产生的后代数 (>= 1)
        mutation_probability: 后代发生一次变异的概率, [0, 1]
        seed: 主种子, 决定验证集划分、初始种群与整个进化过程
    """

    population_size: int = 32
    iterations: int = 20
    tournament_size: int = 3
    offspring_per_iteration: int = 32
    mutation_probability: float = 0.1
    seed: int = 0

    def __post_init__(self):
        _require_int("population_size", self.population_size, 2)
        _require_int("iterations", self.iterations, 1)
        _require_int("tournament_size", self.tournament_size, 2)
        _require_int("offspring_per_iteration", self.offspring_per_iteration, 1)
        _require_int("seed", self.seed, 0)
        p = self.mutation_probability
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
            raise ConfigError(f"mutation_probability 应在 [0, 1] 之间, 实际为 {p!r}")
        object.__setattr__(self, "mutation_probability", float(p))

    def with_seed(self, seed: int) -> "GAConfig":
        return replace(self, seed=seed)

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "GAConfig":
        known = {
            "population_size",
            "iterations",
            "tournament_size",
            "offspring_per_iteration",
            "mutation_probability",
            "seed",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"GAConfig 不支持的参数: {', '.join(sorted(unknown))}")
        return cls(**raw)
