# Streamlit 实验报告查看页面 (只读, 仅表格)

import argparse
import os
import sys
from typing import Any, Dict, Optional

import pandas as pd
import streamlit as st

# 添加项目根目录到路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.errors import GenesimError
from src.eval import load_report
from src.tree import deserialize

# 页面配置
st.set_page_config(
    page_title="GENESIM - 实验报告",
    page_icon="🌲",
    layout="wide",
    initial_sidebar_state="expanded",
)

st.markdown(
    """
<style>
.error-message {
    background-color: #f8d7da;
    color: #721c24;
    padding: 0.5rem;
    border-radius: 0.3rem;
    margin: 0.3rem 0;
}
</style>
""",
    unsafe_allow_html=True,
)


def parse_args() -> argparse.Namespace:
    """解析 `streamlit run app.py -- --results DIR` 传入的参数"""
    parser = argparse.ArgumentParser()
    parser.add_argument("--results", default="results")
    args, _ = parser.parse_known_args(sys.argv[1:])
    return args


def load_table(results_dir: str, name: str) -> Optional[pd.DataFrame]:
    path = os.path.join(results_dir, name)
    if not os.path.isfile(path):
        return None
    return pd.read_csv(path, dtype=str, keep_default_na=False)


def display_errors(document: Dict[str, Any]):
    """列出失败的实验单元"""
    failed = [c for c in document.get("cells", []) if c.get("errors")]
    if not failed:
        st.success("所有实验单元均已完成")
        return
    for cell in failed:
        for error in cell["errors"]:
            st.markdown(
                f'<div class="error-message">❌ {cell["dataset"]} / {cell["algorithm"]}: {error}</div>',
                unsafe_allow_html=True,
            )


def display_wtl(wtl: pd.DataFrame):
    """按指标把长表展开为 "胜-平-负" 矩阵"""
    for metric, group in wtl.groupby("metric", sort=False):
        st.subheader(f"⚖️ Win-Tie-Loss ({metric})")
        group = group.assign(wtl=group["wins"] + "-" + group["ties"] + "-" + group["losses"])
        matrix = group.pivot(index="algorithm_a", columns="algorithm_b", values="wtl").fillna("")
        st.dataframe(matrix, use_container_width=True)


def display_tree_inspector():
    """粘贴或上传序列化的树, 显示其结构统计与 JSON"""
    st.header("🌲 决策树查看")
    uploaded = st.file_uploader("上传树 JSON 文件", type=["json"])
    text = uploaded.read().decode("utf-8") if uploaded is not None else st.text_area("或粘贴树 JSON", height=200)
    if not text:
        return
    try:
        tree = deserialize(text)
    except GenesimError as e:
        st.error(f"无法解析决策树: {e}")
        return

    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("节点数", tree.node_count)
    with col2:
        st.metric("深度", tree.depth)
    with col3:
        st.metric("使用的特征", len(tree.used_features()))
    st.json(text)


def main():
    """主函数"""
    args = parse_args()

    st.title("🌲 GENESIM - 实验报告")

    with st.sidebar:
        st.header("🎛️ 控制面板")
        results_dir = st.text_input("📁 结果目录", value=args.results)
        page = st.radio("页面", ["📊 实验结果", "🌲 决策树查看"])

    if page == "🌲 决策树查看":
        display_tree_inspector()
        return

    results_path = os.path.join(results_dir, "results.json")
    if not os.path.isfile(results_path):
        st.warning(f"目录 {results_dir} 中没有 results.json, 请先运行 benchmark")
        return

    document = load_report(results_path)
    col1, col2, col3, col4 = st.columns(4)
    with col1:
        st.metric("数据集", len(document.get("datasets", [])))
    with col2:
        st.metric("算法", len(document.get("algorithms", [])))
    with col3:
        st.metric("折数", document.get("n_folds", 0))
    with col4:
        st.metric("重复次数", document.get("n_repeats", 0))

    for name, title in (("accuracy.csv", "🎯 平均准确率"), ("complexity.csv", "🧩 模型复杂度")):
        table = load_table(results_dir, name)
        st.header(title)
        if table is None:
            st.info(f"缺少 {name}")
        else:
            st.dataframe(table.set_index("dataset"), use_container_width=True)

    wtl = load_table(results_dir, "wtl.csv")
    if wtl is not None and not wtl.empty:
        display_wtl(wtl)

    st.header("❗ 失败的实验单元")
    display_errors(document)


if __name__ == "__main__":
    main()
