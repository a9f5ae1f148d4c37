# 全局配置加载 (config.yaml + .env)

import copy
import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger

from .errors import ConfigError

# config.yaml 缺失时使用的默认配置
DEFAULT_SETTINGS: Dict[str, Any] = {
    "seed": 0,
    "induce": {
        "criterion": "gini",
        "max_depth": None,
        "min_samples_leaf": 2,
        "min_samples_split": 4,
    },
    "ensemble": {
        "criteria": ["gini", "entropy"],
        "bagging_rounds": 10,
        "boosting_rounds": 5,
        "boost_max_depth": 3,
    },
    "genetic": {
        "population_size": 32,
        "iterations": 20,
        "tournament_size": 3,
        "offspring_per_iteration": 32,
        "mutation_probability": 0.1,
    },
    "experiment": {
        "n_folds": 3,
        "n_repeats": 10,
        "bootstrap_resamples": 10000,
        "alpha": 0.05,
        "jobs": 1,
    },
    "logging": {
        "level": "INFO",
        "log_file": None,
    },
    "ui": {
        "host": "localhost",
        "port": 8501,
    },
}


def _merge(defaults: Dict[str, Any], overrides: Dict[str, Any], path: str = "") -> Dict[str, Any]:
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        where = f"{path}{key}"
        if key not in defaults:
            logger.warning(f"⚠️ 忽略未知配置项: {where}")
            continue
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"配置项 {where} 应为映射, 实际为 {type(value).__name__}")
            merged[key] = _merge(defaults[key], value, f"{where}.")
        else:
            merged[key] = value
    return merged


def load_settings(config_file: str = "config.yaml") -> Dict[str, Any]:
    """加载主配置文件, 与默认配置合并"""
    load_dotenv()

    if not os.path.exists(config_file):
        logger.warning(f"⚠️ 配置文件 {config_file} 不存在，将使用默认配置")
        return copy.deepcopy(DEFAULT_SETTINGS)

    try:
        with open(config_file, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"加载配置文件 {config_file} 失败: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigError(f"配置文件 {config_file} 顶层应为映射")
    return _merge(DEFAULT_SETTINGS, raw)


def resolve_seed(flag: Optional[int], settings: Dict[str, Any]) -> int:
    """种子优先级: 命令行 > 环境变量 GENESIM_SEED > 配置文件"""
    if flag is not None:
        return int(flag)
    env_seed = os.getenv("GENESIM_SEED")
    if env_seed:
        try:
            return int(env_seed)
        except ValueError as e:
            raise ConfigError(f"环境变量 GENESIM_SEED 不是整数: {env_seed!r}") from e
    return int(settings.get("seed") or 0)


def resolve_log_level(flag: Optional[str], settings: Dict[str, Any]) -> str:
    """日志级别优先级: 命令行 > 环境变量 GENESIM_LOG_LEVEL > 配置文件"""
    if flag:
        return flag
    return os.getenv("GENESIM_LOG_LEVEL") or settings["logging"]["level"]
