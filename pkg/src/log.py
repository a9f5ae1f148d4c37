# 日志配置 (loguru)

import os
import sys
from typing import Optional

from loguru import logger

_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {message}"


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """配置日志输出: stderr 必选, 文件可选"""
    level = level.upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format=_FORMAT)

    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        logger.add(log_file, level=level, rotation="10 MB", encoding="utf-8")
