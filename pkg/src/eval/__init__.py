from .experiment_manager import (
    CellResult,
    DatasetEntry,
    ExperimentConfig,
    ExperimentReport,
    load_report,
    run_experiment,
    run_experiment_async,
)
from .report import REPORT_FILES, emit_report, summary_table, wtl_table
from .statistics import WTL, WTLMatrix, bootstrap_p, build_wtl

__all__ = [
    "CellResult",
    "DatasetEntry",
    "ExperimentConfig",
    "ExperimentReport",
    "REPORT_FILES",
    "WTL",
    "WTLMatrix",
    "bootstrap_p",
    "build_wtl",
    "emit_report",
    "load_report",
    "run_experiment",
    "run_experiment_async",
    "summary_table",
    "wtl_table",
]
