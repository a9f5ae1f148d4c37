# 随机种子派生
#
# 系统中所有随机性都来自一个主种子, 各子流通过 SeedSequence 按 key 派生,
# 因此并发执行时结果也与执行顺序无关。

from typing import Union

import numpy as np

Key = Union[int, str]

# 字符串 key 映射成固定整数, 避免依赖 Python 的随机化 hash
_STREAM_IDS = {
    "folds": 1,
    "split": 2,
    "induce": 3,
    "bag": 4,
    "boost": 5,
    "fill": 6,
    "offspring": 7,
    "bootstrap": 8,
    "cell": 9,
}


def _entropy(master: int, keys) -> list:
    words = [int(master) & 0xFFFFFFFFFFFFFFFF]
    for key in keys:
        if isinstance(key, str):
            if key not in _STREAM_IDS:
                raise KeyError(f"未知的随机流名称: {key}")
            key = 1_000_003 * _STREAM_IDS[key]
        words.append(int(key) & 0xFFFFFFFFFFFFFFFF)
    return words


def derive_seed(master: int, *keys: Key) -> int:
    """由主种子和 key 序列派生一个 32 位整数种子"""
    seq = np.random.SeedSequence(_entropy(master, keys))
    return int(seq.generate_state(1, dtype=np.uint32)[0])


def derive_rng(master: int, *keys: Key) -> np.random.Generator:
    """由主种子和 key 序列派生独立的随机数生成器"""
    return np.random.default_rng(np.random.SeedSequence(_entropy(master, keys)))
