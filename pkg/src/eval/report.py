# 报告输出: results.json、accuracy.csv、complexity.csv、wtl.csv

from pathlib import Path
from typing import Dict, List, Sequence, Union

import orjson
import pandas as pd
from loguru import logger

from .experiment_manager import ExperimentReport
from .statistics import WTLMatrix

REPORT_FILES = ("results.json", "accuracy.csv", "complexity.csv", "wtl.csv")


def _format_cell(mean, std) -> str:
    # repr 是最短的可往返浮点表示
    if mean is None:
        return ""
    return f"{mean!r}±{std!r}"


def summary_table(report: ExperimentReport, metric: str) -> pd.DataFrame:
    """数据集为行、算法为列的 "mean±std" 表"""
    rows: List[Dict[str, str]] = []
    for dataset in report.datasets:
        row = {"dataset": dataset}
        for algorithm in report.algorithms:
            cell = report.cell(dataset, algorithm)
            summary = (None, None) if cell is None else (
                cell.accuracy_summary if metric == "accuracy" else cell.complexity_summary
            )
            row[algorithm] = _format_cell(*summary)
        rows.append(row)
    return pd.DataFrame(rows, columns=["dataset"] + list(report.algorithms))


def wtl_table(matrices: Sequence[WTLMatrix]) -> pd.DataFrame:
    rows = [row for matrix in matrices for row in matrix.rows()]
    return pd.DataFrame(rows, columns=["metric", "algorithm_a", "algorithm_b", "wins", "ties", "losses"])


def emit_report(
    report: ExperimentReport,
    wtl: Union[WTLMatrix, Sequence[WTLMatrix]],
    path: Union[str, Path],
) -> List[Path]:
    """把实验结果写入输出目录, 内容顺序固定 (同一报告重复输出逐字节相同)"""
    matrices = [wtl] if isinstance(wtl, WTLMatrix) else list(wtl)
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)

    document = report.to_dict()
    document["wtl"] = [
        {
            "metric": m.metric,
            "n_datasets": m.n_datasets,
            "cells": m.rows(),
            "flagged": [list(f) for f in m.flagged],
        }
        for m in matrices
    ]
    written = [out / name for name in REPORT_FILES]
    written[0].write_bytes(orjson.dumps(document, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
    summary_table(report, "accuracy").to_csv(written[1], index=False)
    summary_table(report, "complexity").to_csv(written[2], index=False)
    wtl_table(matrices).to_csv(written[3], index=False)

    logger.info(f"📄 结果已导出到: {out}")
    return written
