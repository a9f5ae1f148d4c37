# 统一异常定义

from typing import Optional


class GenesimError(Exception):
    """所有业务异常的基类"""


class ValidationError(GenesimError, ValueError):
    """输入值不满足前置条件或不变量"""


class ConfigError(GenesimError):
    """配置缺失、类型错误或引用的文件不存在"""


class ParseError(GenesimError):
    """CSV / JSON 内容无法解析"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"第 {line} 行: {message}"
        super().__init__(message)
