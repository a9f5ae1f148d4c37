# CSV 数据加载: 自动类型推断、序数编码、缺失值插补

import os
import re
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import orjson
import pandas as pd
from loguru import logger

from ..errors import ConfigError, ParseError, ValidationError
from .dataset import Dataset, FeatureKind, FeatureSpec

# 数值型且不同取值超过该数量的列视为连续特征
CONTINUOUS_DISTINCT_THRESHOLD = 10

MISSING_TOKENS = ("", "?")

_LINE_PATTERN = re.compile(r"line (\d+)")


def _read_manifest(manifest_path: str) -> Tuple[Dict[str, Dict[str, Any]], Optional[List[str]]]:
    """读取数据集清单 JSON, 返回 (列描述, 类别顺序)

    支持两种写法:
      {"col": {"kind": "discrete"}, "label": {"label_column": true}}
      {"columns": {...同上...}, "classes": ["a", "b"]}
    """
    if not os.path.exists(manifest_path):
        raise ConfigError(f"清单文件不存在: {manifest_path}")
    try:
        with open(manifest_path, "rb") as f:
            raw = orjson.loads(f.read())
    except orjson.JSONDecodeError as e:
        raise ParseError(f"清单文件 {manifest_path} 不是合法 JSON: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigError(f"清单文件 {manifest_path} 顶层应为对象")

    classes = None
    columns = raw
    if isinstance(raw.get("columns"), dict):
        columns = raw["columns"]
        classes = raw.get("classes")
        if classes is not None and not (isinstance(classes, list) and all(isinstance(c, str) for c in classes)):
            raise ConfigError("清单中的 classes 应为字符串列表")

    for name, entry in columns.items():
        if not isinstance(entry, dict):
            raise ConfigError(f"清单中列 {name} 的描述应为对象")
    return columns, classes


def _parse_kind(column: str, kind: Any) -> FeatureKind:
    try:
        return FeatureKind(kind)
    except ValueError:
        valid = ", ".join(k.value for k in FeatureKind)
        raise ConfigError(f"列 {column} 的类型 {kind!r} 无效, 可选: {valid}") from None


def _encode_column(
    name: str, values: pd.Series, missing: pd.Series, kind: Optional[FeatureKind]
) -> Optional[Tuple[FeatureSpec, np.ndarray]]:
    """推断单列类型并编码; 不携带信息的列返回 None"""
    present = values[~missing]
    if present.empty:
        logger.warning(f"⚠️ 列 {name} 全部缺失，已忽略")
        return None

    numeric = pd.to_numeric(present, errors="coerce")
    is_numeric = not numeric.isna().any()

    if kind is None:
        distinct = numeric.nunique() if is_numeric else present.nunique()
        kind = FeatureKind.CONTINUOUS if is_numeric and distinct > CONTINUOUS_DISTINCT_THRESHOLD else FeatureKind.DISCRETE
    elif kind is FeatureKind.CONTINUOUS and not is_numeric:
        raise ConfigError(f"列 {name} 含非数值内容, 不能作为连续特征")

    if kind is FeatureKind.CONTINUOUS:
        column = pd.to_numeric(values.where(~missing), errors="coerce").to_numpy(dtype=float)
        low, high = float(np.nanmin(column)), float(np.nanmax(column))
        if low == high:
            logger.warning(f"⚠️ 列 {name} 只有一个取值，已忽略")
            return None
        column[np.isnan(column)] = float(np.nanmedian(column))
        return FeatureSpec(name, kind, (low, high)), column

    # 离散特征: 数值列按数值升序编码, 其余按首次出现顺序编码
    if is_numeric:
        first_seen = {}
        for text, number in zip(present, numeric):
            first_seen.setdefault(float(number), text)
        order = sorted(first_seen)
        categories = tuple(first_seen[v] for v in order)
        code_of = {v: i for i, v in enumerate(order)}
        keys = pd.to_numeric(values.where(~missing), errors="coerce")
        codes = np.array([-1 if np.isnan(v) else code_of[float(v)] for v in keys], dtype=float)
    else:
        categories = tuple(pd.unique(present))
        code_of = {c: i for i, c in enumerate(categories)}
        codes = np.array([-1 if m else code_of[v] for v, m in zip(values, missing)], dtype=float)

    if len(categories) < 2:
        logger.warning(f"⚠️ 列 {name} 只有一个取值，已忽略")
        return None

    known = codes >= 0
    # 众数插补, 并列时取编码最小者
    mode = int(np.bincount(codes[known].astype(np.int64)).argmax())
    codes[~known] = mode
    spec = FeatureSpec(
        name,
        kind,
        (0.0, float(len(categories) - 1)),
        category_count=len(categories),
        categories=categories,
    )
    return spec, codes


def load_csv(
    path: str,
    label_column: Optional[str] = None,
    feature_kinds: Optional[Dict[str, str]] = None,
    manifest: Optional[str] = None,
    name: Optional[str] = None,
) -> Dataset:
    """从 CSV 加载数据集

    Args:
        path: CSV 文件路径 (UTF-8, 逗号分隔, 含表头; 空单元格或 "?" 视为缺失)
        label_column: 类别列名, 可由清单文件提供
        feature_kinds: 按列覆盖自动推断的类型 ("continuous" / "discrete")
        manifest: 可选的清单 JSON 路径
        name: 数据集名称, 默认取文件名
    """
    if not os.path.exists(path):
        raise ConfigError(f"数据文件不存在: {path}")

    kinds: Dict[str, FeatureKind] = {}
    classes = None
    if manifest:
        columns, classes = _read_manifest(manifest)
        flagged = [col for col, entry in columns.items() if entry.get("label_column")]
        if len(flagged) > 1:
            raise ConfigError(f"清单中标记了多个类别列: {', '.join(flagged)}")
        if flagged:
            if label_column and label_column != flagged[0]:
                raise ConfigError(f"类别列冲突: 参数为 {label_column}, 清单为 {flagged[0]}")
            label_column = flagged[0]
        for col, entry in columns.items():
            if "kind" in entry:
                kinds[col] = _parse_kind(col, entry["kind"])
    for col, kind in (feature_kinds or {}).items():
        kinds[col] = _parse_kind(col, kind)

    if not label_column:
        raise ConfigError("未指定类别列")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise ParseError(f"{path} 为空或缺少表头") from e
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        raise ParseError(f"{path} 格式错误: {e}", line=int(match.group(1)) if match else None) from e
    except UnicodeDecodeError as e:
        raise ParseError(f"{path} 不是 UTF-8 编码: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    frame = frame.apply(lambda s: s.str.strip())

    if label_column not in frame.columns:
        raise ConfigError(f"{path} 中不存在类别列 {label_column}")
    unknown = sorted(set(kinds) - set(frame.columns))
    if unknown:
        raise ConfigError(f"类型覆盖引用了不存在的列: {', '.join(unknown)}")

    missing = frame.isin(MISSING_TOKENS)

    # 类别缺失的行无法使用
    unlabeled = missing[label_column].to_numpy()
    if unlabeled.any():
        logger.warning(f"⚠️ {path} 中有 {int(unlabeled.sum())} 行缺少类别，已丢弃")
        frame = frame[~unlabeled].reset_index(drop=True)
        missing = missing[~unlabeled].reset_index(drop=True)
    if frame.empty:
        raise ValidationError(f"{path} 中没有可用样本")

    raw_labels = frame[label_column]
    class_names = tuple(classes) if classes else tuple(pd.unique(raw_labels))
    index_of = {c: i for i, c in enumerate(class_names)}
    stray = sorted(set(raw_labels) - set(index_of))
    if stray:
        raise ValidationError(f"清单未列出的类别: {', '.join(stray)}")
    labels = np.array([index_of[v] for v in raw_labels], dtype=np.int64)

    specs: List[FeatureSpec] = []
    columns: List[np.ndarray] = []
    for col in frame.columns:
        if col == label_column:
            continue
        encoded = _encode_column(col, frame[col], missing[col], kinds.get(col))
        if encoded is None:
            continue
        spec, values = encoded
        specs.append(spec)
        columns.append(values)

    if not specs:
        raise ValidationError(f"{path} 中没有可用的特征列")

    dataset = Dataset(
        features=tuple(specs),
        rows=np.column_stack(columns),
        labels=labels,
        class_names=class_names,
        name=name or os.path.splitext(os.path.basename(path))[0],
    )
    logger.debug(f"📥 已加载 {dataset.name}: {dataset.summary()}")
    return dataset
