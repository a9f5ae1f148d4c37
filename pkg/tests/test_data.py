import numpy as np
import orjson
import pytest

from src.data import FeatureKind, load_csv, make_folds, split_half
from src.errors import ConfigError, ParseError, ValidationError

MIXED_CSV = """x,color,y
1,red,a
2,blue,b
3,red,a
4,red,b
5,,a
6,blue,b
7,red,a
8,blue,b
9,red,a
10,blue,b
11,red,a
?,blue,b
"""


def test_iris_summary(iris):
    assert iris.n_samples == 150
    assert iris.n_features == 4
    assert iris.n_classes == 3
    summary = iris.summary()
    assert summary["continuous"] == 4
    assert summary["discrete"] == 0
    assert summary["class_dist"] == [33.3, 33.3, 33.3]
    assert iris.class_names == ("setosa", "versicolor", "virginica")


def test_minimal_dataset(write_csv):
    path = write_csv("tiny.csv", "f,label\n1,a\n2,b\n")
    ds = load_csv(path, label_column="label")
    assert (ds.n_samples, ds.n_features, ds.n_classes) == (2, 1, 2)


def test_imputation_and_encoding(write_csv):
    ds = load_csv(write_csv("mixed.csv", MIXED_CSV), label_column="y")
    x, color = ds.features
    assert x.kind is FeatureKind.CONTINUOUS
    assert color.kind is FeatureKind.DISCRETE
    assert color.categories == ("red", "blue")
    # 连续列用中位数插补, 离散列用众数插补
    assert ds.rows[11, 0] == 6.0
    assert ds.rows[4, 1] == 0.0
    assert color.decode(1.0) == "blue"
    assert list(ds.class_counts()) == [6, 6]


def test_feature_kind_override(write_csv):
    ds = load_csv(write_csv("mixed.csv", MIXED_CSV), label_column="y", feature_kinds={"x": "discrete"})
    assert ds.features[0].kind is FeatureKind.DISCRETE
    assert ds.features[0].category_count == 11


def test_missing_file():
    with pytest.raises(ConfigError):
        load_csv("/nonexistent/data.csv", label_column="y")


def test_missing_label_column(write_csv):
    path = write_csv("mixed.csv", MIXED_CSV)
    with pytest.raises(ConfigError):
        load_csv(path, label_column="species")
    with pytest.raises(ConfigError):
        load_csv(path)


def test_malformed_csv_reports_line(write_csv):
    path = write_csv("bad.csv", "a,b\n1,x\n2,y,z\n")
    with pytest.raises(ParseError) as info:
        load_csv(path, label_column="b")
    assert info.value.line == 3


def test_manifest_label_and_class_order(write_csv, tmp_path):
    manifest = tmp_path / "manifest.json"
    manifest.write_bytes(
        orjson.dumps({"columns": {"y": {"label_column": True}, "color": {"kind": "discrete"}}, "classes": ["b", "a"]})
    )
    ds = load_csv(write_csv("mixed.csv", MIXED_CSV), manifest=str(manifest))
    assert ds.class_names == ("b", "a")
    assert ds.labels[0] == 1


def test_manifest_class_without_samples(write_csv, tmp_path):
    manifest = tmp_path / "manifest.json"
    manifest.write_bytes(orjson.dumps({"columns": {"y": {"label_column": True}}, "classes": ["a", "b", "c"]}))
    with pytest.raises(ValidationError):
        load_csv(write_csv("mixed.csv", MIXED_CSV), manifest=str(manifest))


def test_iris_folds_are_stratified(iris):
    plan = make_folds(iris, 3, 10, seed=1)
    assert len(plan.assignments) == 10
    for repeat in range(10):
        for fold in range(3):
            _, test = plan.split(repeat, fold)
            assert test.size == 50
            per_class = iris.class_counts(test)
            assert per_class.min() >= 16 and per_class.max() <= 17


def test_folds_are_deterministic(iris):
    a = make_folds(iris, 2, 1, seed=5)
    b = make_folds(iris, 2, 1, seed=5)
    assert np.array_equal(a.assignments[0], b.assignments[0])
    assert a.fingerprint(0) == b.fingerprint(0)
    assert make_folds(iris, 2, 1, seed=6).fingerprint(0) != a.fingerprint(0)


def test_folds_reject_small_class(dataset_factory):
    ds = dataset_factory(np.arange(12).reshape(6, 2), [0, 0, 0, 0, 1, 1])
    with pytest.raises(ValidationError, match="c1"):
        make_folds(ds, 3, 1, seed=0)


def test_split_half_partitions(blobs):
    grow, validation = split_half(blobs, np.arange(100), seed=3)
    assert grow.size == validation.size == 50
    assert set(grow).isdisjoint(validation)
    assert sorted(set(grow) | set(validation)) == list(range(100))

    grow, validation = split_half(blobs, np.arange(99), seed=3)
    assert sorted((grow.size, validation.size)) == [49, 50]


def test_split_half_on_iris_fold(iris):
    train, _ = make_folds(iris, 3, 1, seed=0).split(0, 0)
    assert train.size == 100
    for half in split_half(iris, train, seed=0):
        per_class = iris.class_counts(half)
        assert per_class.min() >= 16 and per_class.max() <= 17


def test_split_half_needs_two_samples(blobs):
    with pytest.raises(ValidationError):
        split_half(blobs, [0], seed=0)
