# 默认的对比算法阵容 (benchmark 配置未列出 algorithms 时使用)

from typing import List

from .base_algorithm import AlgorithmKind, AlgorithmSpec

DEFAULT_ALGORITHMS = (
    {"name": "GENESIM", "kind": AlgorithmKind.GENESIM},
    {"name": "CART", "kind": AlgorithmKind.SINGLE_TREE, "parameters": {"criterion": "gini"}},
    {"name": "ID3", "kind": AlgorithmKind.SINGLE_TREE, "parameters": {"criterion": "entropy"}},
    {"name": "Bagging", "kind": AlgorithmKind.BAGGED_COMMITTEE},
    {"name": "AdaBoost", "kind": AlgorithmKind.BOOSTED_COMMITTEE},
    {"name": "Majority", "kind": AlgorithmKind.MAJORITY},
)


def default_algorithms() -> List[AlgorithmSpec]:
    return [AlgorithmSpec(p["name"], p["kind"], dict(p.get("parameters", {}))) for p in DEFAULT_ALGORITHMS]
