#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
GENESIM - 把决策树集成合并为单棵可解释决策树的遗传算法

使用方法:
1. 归纳单棵树:     python main.py induce --data datasets/iris.csv --label species
2. 运行 GENESIM:   python main.py genesim --data datasets/iris.csv --label species --trace trace.csv
3. 对比实验:       python main.py benchmark experiment.json --jobs 4
4. 合并两棵树:     python main.py merge a.json b.json
5. 查看实验报告:   python main.py view --results results
"""

import argparse
import os
import subprocess
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional

import orjson
from loguru import logger

# 添加项目根目录到路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.data import load_csv, make_folds
from src.errors import ConfigError, ParseError, ValidationError
from src.eval import ExperimentConfig, build_wtl, emit_report, run_experiment
from src.genetic import GAConfig, run_genesim, write_trace_csv
from src.induce import EnsembleConfig, InduceConfig, induce_tree
from src.log import setup_logging
from src.seeding import derive_rng
from src.settings import load_settings, resolve_log_level, resolve_seed
from src.space import merge_regions, regions_to_tree, tree_to_regions
from src.tree import accuracy, deserialize, serialize, tree_to_dict

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

HOLDOUT_FOLDS = 3


def _print_json(document: Dict[str, Any]) -> None:
    sys.stdout.write(orjson.dumps(document, option=orjson.OPT_INDENT_2).decode("utf-8") + "\n")
    sys.stdout.flush()


def _load_dataset(args):
    return load_csv(args.data, label_column=args.label, manifest=args.manifest)


def _read_text(path: str) -> str:
    if not os.path.isfile(path):
        raise ConfigError(f"文件不存在: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------


def cmd_induce(args, settings: Dict[str, Any]) -> int:
    """归纳一棵决策树并输出 JSON"""
    overrides = {
        "criterion": args.criterion,
        "max_depth": args.max_depth,
        "min_samples_leaf": args.min_samples_leaf,
        "min_samples_split": args.min_samples_split,
    }
    raw = {**settings["induce"], **{k: v for k, v in overrides.items() if v is not None}}
    config = InduceConfig.from_dict({**raw, "seed": args.seed})

    dataset = _load_dataset(args)
    indices = range(dataset.n_samples)
    tree = induce_tree(dataset, indices, config)
    logger.info(f"🌲 归纳完成: {tree.node_count} 个节点, 深度 {tree.depth}")
    _print_json(
        {
            "tree": tree_to_dict(tree),
            "node_count": tree.node_count,
            "training_accuracy": accuracy(tree, dataset, indices),
        }
    )
    return EXIT_OK


def cmd_genesim(args, settings: Dict[str, Any]) -> int:
    """在分层 holdout 划分上运行 GENESIM"""
    overrides = {
        "population_size": args.population_size,
        "iterations": args.iterations,
        "tournament_size": args.tournament_size,
        "offspring_per_iteration": args.offspring,
        "mutation_probability": args.mutation_probability,
    }
    raw = {**settings["genetic"], **{k: v for k, v in overrides.items() if v is not None}}
    config = GAConfig.from_dict({**raw, "seed": args.seed})
    ensemble_config = EnsembleConfig.from_dict(settings["ensemble"], settings["induce"])

    dataset = _load_dataset(args)
    train, test = make_folds(dataset, HOLDOUT_FOLDS, 1, args.seed).split(0, 0)
    logger.info(f"🧬 GENESIM: 训练 {train.size} 个样本, holdout {test.size} 个样本")

    trace: List = []
    tree = run_genesim(dataset, train, config, ensemble_config, trace=trace, jobs=args.jobs)
    if args.trace:
        write_trace_csv(trace, args.trace)
        logger.info(f"📄 进化轨迹已写入: {args.trace}")

    _print_json(
        {
            "tree": tree_to_dict(tree),
            "node_count": tree.node_count,
            "holdout_accuracy": accuracy(tree, dataset, test),
        }
    )
    return EXIT_OK


def cmd_benchmark(args, settings: Dict[str, Any]) -> int:
    """按实验配置运行完整的对比实验并输出报告"""
    experiment = settings["experiment"]
    defaults = {
        "seed": resolve_seed(None, settings),
        "n_folds": experiment["n_folds"],
        "n_repeats": experiment["n_repeats"],
        "bootstrap_resamples": experiment["bootstrap_resamples"],
        "alpha": experiment["alpha"],
    }
    config = ExperimentConfig.from_file(args.experiment, defaults)
    if args.seed_flag is not None:
        config = replace(config, seed=args.seed_flag)
    if args.output:
        config = replace(config, output_dir=args.output)
    jobs = args.jobs or experiment["jobs"]

    # 计算开始前完成全部校验, 失败时不产生任何输出文件
    config.check_files()
    datasets = [entry.load() for entry in config.datasets]
    for dataset in datasets:
        make_folds(dataset, config.n_folds, config.n_repeats, config.seed)

    report = run_experiment(
        datasets,
        config.algorithms,
        config.n_folds,
        config.n_repeats,
        config.seed,
        jobs=jobs,
        settings=settings,
    )
    matrices = [
        build_wtl(report, config.alpha, metric, resamples=config.bootstrap_resamples)
        for metric in ("accuracy", "complexity")
    ]
    emit_report(report, matrices, config.output_dir)
    return EXIT_OK


def cmd_merge(args, settings: Dict[str, Any]) -> int:
    """合并两棵序列化的树: 输出重建的树或合并后的区域集合"""
    first = deserialize(_read_text(args.first))
    second = deserialize(_read_text(args.second))
    if first.n_features != second.n_features:
        raise ValidationError(f"两棵树的特征数不一致: {first.n_features} vs {second.n_features}")

    k = first.n_features
    merged = merge_regions(tree_to_regions(first, k), tree_to_regions(second, k))
    logger.info(f"🔀 合并得到 {len(merged)} 个区域")
    if args.regions:
        sys.stdout.write(merged.to_json() + "\n")
    else:
        sys.stdout.write(serialize(regions_to_tree(merged, derive_rng(args.seed, "induce"))) + "\n")
    sys.stdout.flush()
    return EXIT_OK


def cmd_view(args, settings: Dict[str, Any]) -> int:
    """启动 Streamlit 报告查看页面"""
    ui = settings["ui"]
    host, port = ui["host"], ui["port"]
    app = os.path.join(os.path.dirname(os.path.abspath(__file__)), "src", "ui", "streamlit_app.py")
    logger.info(f"📱 请在浏览器中访问: http://{host}:{port}")
    cmd = [
        sys.executable,
        "-m",
        "streamlit",
        "run",
        app,
        f"--server.port={port}",
        f"--server.address={host}",
        "--",
        "--results",
        args.results,
    ]
    return subprocess.run(cmd).returncode


# ---------------------------------------------------------------------------
# 参数解析
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="GENESIM - 决策树集成合并为单棵决策树",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用示例:
  python main.py induce --data datasets/iris.csv --label species --criterion gini
  python main.py genesim --data datasets/iris.csv --label species --seed 42
  python main.py benchmark experiment.json --jobs 4
  python main.py merge a.json b.json --regions
  python main.py view --results results
        """,
    )
    parser.add_argument("--config", default="config.yaml", help="配置文件路径 (默认: config.yaml)")
    parser.add_argument("--seed", type=int, default=None, help="主随机种子 (优先于 GENESIM_SEED 与配置文件)")
    parser.add_argument("--log-level", default=None, help="日志级别 (DEBUG / INFO / WARNING / ERROR)")
    sub = parser.add_subparsers(dest="command", required=True)

    # 子命令也接受 --seed; 未给出时保留顶层的值
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="主随机种子 (同顶层 --seed)")

    def add_data_args(p):
        p.add_argument("--data", required=True, help="CSV 数据文件")
        p.add_argument("--label", default=None, help="类别列名 (也可由清单文件指定)")
        p.add_argument("--manifest", default=None, help="可选的 JSON 列描述文件")

    p = sub.add_parser("induce", parents=[common], help="归纳单棵决策树")
    add_data_args(p)
    p.add_argument("--criterion", default=None, help="划分准则: gini / entropy")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--min-samples-leaf", type=int, default=None)
    p.add_argument("--min-samples-split", type=int, default=None)
    p.set_defaults(handler=cmd_induce)

    p = sub.add_parser("genesim", parents=[common], help="在 holdout 划分上运行 GENESIM")
    add_data_args(p)
    p.add_argument("--population-size", type=int, default=None)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--tournament-size", type=int, default=None)
    p.add_argument("--offspring", type=int, default=None, help="每轮产生的后代数")
    p.add_argument("--mutation-probability", type=float, default=None)
    p.add_argument("--trace", default=None, help="进化轨迹 CSV 输出路径")
    p.add_argument("--jobs", type=int, default=1, help="并行产生后代的线程数")
    p.set_defaults(handler=cmd_genesim)

    p = sub.add_parser("benchmark", parents=[common], help="按实验配置运行重复交叉验证对比实验")
    p.add_argument("experiment", help="实验配置文件 (JSON 或 YAML)")
    p.add_argument("--jobs", type=int, default=None, help="并发执行的实验单元数")
    p.add_argument("--output", default=None, help="覆盖配置中的输出目录")
    p.set_defaults(handler=cmd_benchmark)

    p = sub.add_parser("merge", parents=[common], help="合并两棵序列化的决策树")
    p.add_argument("first", help="第一棵树的 JSON 文件")
    p.add_argument("second", help="第二棵树的 JSON 文件")
    p.add_argument("--regions", action="store_true", help="输出合并后的区域集合而不是重建的树")
    p.set_defaults(handler=cmd_merge)

    p = sub.add_parser("view", parents=[common], help="启动 Streamlit 报告查看页面")
    p.add_argument("--results", default="results", help="benchmark 输出目录")
    p.set_defaults(handler=cmd_view)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数, 返回退出码: 0 成功, 2 输入或配置错误, 1 内部错误"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.config)
        setup_logging(resolve_log_level(args.log_level, settings), settings["logging"]["log_file"])
        args.seed_flag = args.seed
        args.seed = resolve_seed(args.seed, settings)
        if args.seed < 0:
            raise ConfigError(f"种子必须是非负整数, 实际为 {args.seed}")
        return args.handler(args, settings)
    except (ConfigError, ValidationError, ParseError, FileNotFoundError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.warning("👋 程序已被用户中断")
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception(f"❌ 程序执行失败: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
