# 测试公共夹具: 合成数据集、随机树与随机区域集合

import math
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from src.data import Dataset, FeatureKind, FeatureSpec, load_csv  # noqa: E402
from src.genetic import Fitness, Individual  # noqa: E402
from src.space import RegionSet  # noqa: E402
from src.tree import DecisionTree, Split, bare_leaf_tree, make_leaf  # noqa: E402

DATASETS_DIR = ROOT / "datasets"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 耗时较长的验收测试 (pytest -m 'not slow' 跳过)")


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return ROOT


@pytest.fixture(scope="session")
def iris() -> Dataset:
    return load_csv(str(DATASETS_DIR / "iris.csv"), label_column="species")


def optional_dataset(name: str) -> Dataset:
    """仓库未附带的数据集, 文件不存在时跳过测试; 类别列取最后一列"""
    path = DATASETS_DIR / f"{name}.csv"
    if not path.exists():
        pytest.skip(f"缺少数据集 {path}")
    label = pd.read_csv(path, nrows=0).columns[-1].strip()
    return load_csv(str(path), label_column=label, name=name)


def make_dataset(rows, labels, n_classes=None, low=0.0, high=10.0, name="synthetic") -> Dataset:
    """由数组直接构造连续特征数据集"""
    rows = np.asarray(rows, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    n_classes = n_classes or int(labels.max()) + 1
    features = tuple(
        FeatureSpec(f"x{i}", FeatureKind.CONTINUOUS, (low, high)) for i in range(rows.shape[1])
    )
    return Dataset(
        features=features,
        rows=rows,
        labels=labels,
        class_names=tuple(f"c{i}" for i in range(n_classes)),
        name=name,
    )


@pytest.fixture
def dataset_factory():
    return make_dataset


@pytest.fixture
def blobs() -> Dataset:
    """2 维、2 类的带噪数据, 类别主要由 x0 > 5 决定"""
    rng = np.random.default_rng(7)
    rows = rng.uniform(0.0, 10.0, size=(200, 2))
    labels = (rows[:, 0] > 5.0).astype(np.int64)
    flip = rng.random(200) < 0.1
    labels[flip] = 1 - labels[flip]
    return make_dataset(rows, labels)


def random_node(rng: np.random.Generator, k: int, n_classes: int, depth: int):
    if depth == 0 or rng.random() < 0.2:
        return make_leaf(rng.random(n_classes) + 0.01)
    # 阈值取一位小数, 让不同树之间出现共享的面
    threshold = round(float(rng.uniform(0.0, 10.0)), 1)
    return Split(
        int(rng.integers(k)),
        threshold,
        random_node(rng, k, n_classes, depth - 1),
        random_node(rng, k, n_classes, depth - 1),
    )


def random_tree(rng: np.random.Generator, k: int, depth: int, n_classes: int = 3) -> DecisionTree:
    return DecisionTree(root=random_node(rng, k, n_classes, depth), n_features=k, n_classes=n_classes)


@pytest.fixture
def tree_factory():
    return random_tree


def random_boxes(rng: np.random.Generator, n: int, k: int, n_classes: int = 3) -> RegionSet:
    """任意 (可能相互重叠的) 随机盒子, 部分边界取无穷"""
    a = rng.uniform(0.0, 10.0, size=(n, k))
    b = rng.uniform(0.0, 10.0, size=(n, k))
    lower, upper = np.minimum(a, b), np.maximum(a, b) + 1e-3
    lower[rng.random((n, k)) < 0.1] = -math.inf
    upper[rng.random((n, k)) < 0.1] = math.inf
    dists = rng.random((n, n_classes)) + 0.01
    dists /= dists.sum(axis=1, keepdims=True)
    return RegionSet(lower, upper, dists, np.full(k, -math.inf), np.full(k, math.inf))


def sample_points(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """一半点取一位小数 (恰好落在阈值上), 一半为连续值"""
    points = rng.uniform(-1.0, 11.0, size=(n, k))
    points[: n // 2] = np.round(points[: n // 2], 1)
    return points


def individual_with_fitness(accuracy: float, node_count: int, dataset: Dataset) -> Individual:
    """适应度预先写入缓存的个体, 用于排序与选择测试"""
    ind = Individual(bare_leaf_tree((0.5, 0.5), dataset.n_features), dataset, [0])
    ind.__dict__["fitness"] = Fitness(accuracy, node_count)
    return ind


@pytest.fixture
def fitness_factory(blobs):
    return lambda accuracy, node_count: individual_with_fitness(accuracy, node_count, blobs)


@pytest.fixture
def write_csv(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in ("GENESIM_SEED", "GENESIM_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    yield


@pytest.fixture
def restore_logger():
    yield
    from loguru import logger

    logger.remove()
