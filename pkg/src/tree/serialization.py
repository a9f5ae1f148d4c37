# 决策树 JSON 序列化
#
# 文档格式 (format 1):
#   {"format": 1, "n_features": k, "n_classes": c, "root": <node>}
#   内部节点: {"feature": int, "threshold": float, "left": <node>, "right": <node>}
#   叶节点:   {"distribution": [float, ...]}

from typing import Any, Dict

import orjson

from ..errors import GenesimError, ParseError
from .decision_tree import DecisionTree, Leaf, Node, Split

FORMAT_VERSION = 1


def _node_to_dict(node: Node) -> Dict[str, Any]:
    if isinstance(node, Leaf):
        return {"distribution": list(node.distribution)}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def tree_to_dict(tree: DecisionTree) -> Dict[str, Any]:
    return {
        "format": FORMAT_VERSION,
        "n_features": tree.n_features,
        "n_classes": tree.n_classes,
        "root": _node_to_dict(tree.root),
    }


def serialize(tree: DecisionTree) -> str:
    """序列化为可读的 JSON 文本"""
    return orjson.dumps(tree_to_dict(tree), option=orjson.OPT_INDENT_2).decode("utf-8")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _node_from_dict(raw: Any, where: str) -> Node:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: 节点应为对象")

    if "distribution" in raw:
        dist = raw["distribution"]
        if not isinstance(dist, list) or not all(_is_number(p) for p in dist):
            raise ParseError(f"{where}: distribution 应为数值列表")
        return Leaf(tuple(float(p) for p in dist))

    missing = [key for key in ("feature", "threshold", "left", "right") if key not in raw]
    if missing:
        raise ParseError(f"{where}: 内部节点缺少字段 {', '.join(missing)}")
    if not _is_integer(raw["feature"]):
        raise ParseError(f"{where}: feature 应为整数, 实际为 {raw['feature']!r}")
    if not _is_number(raw["threshold"]):
        raise ParseError(f"{where}: threshold 应为数值, 实际为 {raw['threshold']!r}")
    return Split(
        feature=raw["feature"],
        threshold=float(raw["threshold"]),
        left=_node_from_dict(raw["left"], where + ".left"),
        right=_node_from_dict(raw["right"], where + ".right"),
    )


def tree_from_dict(raw: Any) -> DecisionTree:
    if not isinstance(raw, dict):
        raise ParseError("树文档顶层应为对象")
    if raw.get("format") != FORMAT_VERSION:
        raise ParseError(f"不支持的树格式版本: {raw.get('format')!r}")
    for key in ("n_features", "n_classes"):
        if not _is_integer(raw.get(key)):
            raise ParseError(f"{key} 应为整数")
    if "root" not in raw:
        raise ParseError("树文档缺少 root")

    try:
        root = _node_from_dict(raw["root"], "root")
        return DecisionTree(root=root, n_features=raw["n_features"], n_classes=raw["n_classes"])
    except ParseError:
        raise
    except GenesimError as e:
        raise ParseError(f"树文档不满足约束: {e}") from e


def deserialize(text: str) -> DecisionTree:
    """从 JSON 文本还原决策树"""
    try:
        raw = orjson.loads(text)
    except orjson.JSONDecodeError as e:
        raise ParseError(f"树文档不是合法 JSON: {e}") from e
    return tree_from_dict(raw)
