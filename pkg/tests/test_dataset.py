import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sdrclust.dataset import (
    HAD_GROUPS,
    HAR_GROUPS,
    ClassMap,
    Dataset,
    load_csv,
    regroup,
    regroup_dataset,
    save_csv,
    standardize,
)
from sdrclust.errors import DataError


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_counts_and_label_column(tmp_path):
    f = write(tmp_path / "a.csv", "a,class,b\n1,x,2\n3,y,4\n5,x,6\n7,z,8\n")
    d = load_csv(f, label_column="class")
    assert (d.N, d.n) == (4, 2)
    assert d.columns == ("a", "b")
    np.testing.assert_array_equal(d.points, [[1, 2], [3, 4], [5, 6], [7, 8]])
    np.testing.assert_array_equal(d.labels, [0, 1, 0, 2])


def test_labels_encoded_by_first_occurrence(tmp_path):
    f = write(tmp_path / "a.csv", "v,act\n0.5,walk\n1.5,sit\n2.5,walk\n")
    d = load_csv(f, label_column="act")
    np.testing.assert_array_equal(d.labels, [0, 1, 0])
    assert d.label_names == ("walk", "sit")


def test_wifi_shaped_export(tmp_path, rng):
    # 7 columns, one of which is the room label
    x = rng.integers(-90, -30, size=(2000, 6))
    rooms = rng.integers(1, 5, size=2000)
    lines = ["s1,s2,s3,s4,s5,s6,room"] + [",".join(map(str, r)) + f",{c}" for r, c in zip(x, rooms)]
    d = load_csv(write(tmp_path / "wifi.csv", "\n".join(lines) + "\n"), label_column="room")
    assert (d.N, d.n) == (2000, 6)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty"),
        ("a,b\n1,2\n3\n", "line 3"),
        ("a,b\n1,2\n3,oops\n", "line 3, column 2"),
        ("a,b\n1,nan\n", "non-finite"),
        ("a,b\n", "no data rows"),
    ],
)
def test_load_errors_name_the_position(tmp_path, text, fragment):
    f = write(tmp_path / "bad.csv", text)
    with pytest.raises(DataError, match=fragment):
        load_csv(f)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv")


def test_missing_label_column(tmp_path):
    with pytest.raises(DataError, match="label column"):
        load_csv(write(tmp_path / "a.csv", "a,b\n1,2\n"), label_column="class")


def test_round_trip_is_bit_identical(tmp_path, rng):
    x = rng.normal(size=(50, 4)) * 10.0 ** rng.integers(-8, 8, size=(50, 4))
    d = Dataset(x, labels=rng.integers(0, 3, 50))
    save_csv(d, tmp_path / "r.csv")
    back = load_csv(tmp_path / "r.csv", label_column="label")
    assert np.array_equal(back.points, d.points)
    assert back.points.tobytes() == d.points.tobytes()


@given(arrays(np.float64, (7, 3), elements=st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)))
def test_round_trip_property(tmp_path_factory, x):
    path = tmp_path_factory.mktemp("rt") / "x.csv"
    save_csv(Dataset(x), path)
    assert load_csv(path).points.tobytes() == np.asarray(x, dtype=float).tobytes()


def test_dataset_invariants():
    with pytest.raises(DataError):
        Dataset(np.array([[1.0, np.inf]]))
    with pytest.raises(DataError):
        Dataset(np.ones((3, 2)), labels=[0, 1])
    with pytest.raises(DataError):
        Dataset(np.ones((2, 2)), labels=[0, -1])
    with pytest.raises(DataError):
        Dataset(np.ones((0, 2)))
    d = Dataset(np.ones((2, 2)))
    with pytest.raises(ValueError):
        d.points[0, 0] = 5.0


def test_had_regroups_five_classes_into_four():
    names = ("sitting", "standing", "walking", "running", "dancing")
    cmap = ClassMap.from_names(names, HAD_GROUPS)
    out = regroup(np.arange(5), cmap)
    assert len(np.unique(out)) == 4
    assert out[3] == out[4]
    assert cmap.names == ("sitting", "standing", "normal", "dynamic")


def test_har_regroups_six_classes_into_three():
    names = ("WALKING", "WALKING_UPSTAIRS", "WALKING_DOWNSTAIRS", "SITTING", "STANDING", "LAYING")
    cmap = ClassMap.from_names(names, HAR_GROUPS)
    out = regroup(np.arange(6), cmap)
    np.testing.assert_array_equal(out, [0, 0, 0, 1, 1, 2])
    # the numeric activity ids of the UCI release map the same way
    ids = ClassMap.from_names(("1", "2", "3", "4", "5", "6"), HAR_GROUPS)
    np.testing.assert_array_equal(regroup(np.arange(6), ids), out)


def test_identity_map():
    lab = np.array([2, 0, 1, 1])
    np.testing.assert_array_equal(regroup(lab, ClassMap({0: 0, 1: 1, 2: 2})), lab)


def test_regroup_errors():
    with pytest.raises(DataError, match="no super-class"):
        regroup([0, 1, 3], ClassMap({0: 0, 1: 0}))
    with pytest.raises(DataError, match="contiguous"):
        ClassMap({0: 0, 1: 2})


@given(st.lists(st.integers(0, 4), min_size=1, max_size=40), st.randoms(use_true_random=False))
def test_regroup_commutes_with_row_permutation(labels, rnd):
    cmap = ClassMap({0: 0, 1: 1, 2: 0, 3: 2, 4: 1})
    lab = np.array(labels)
    perm = np.array(rnd.sample(range(len(lab)), len(lab)))
    out = regroup(lab, cmap)
    assert len(out) == len(lab)
    np.testing.assert_array_equal(regroup(lab[perm], cmap), out[perm])


def test_regroup_dataset_keeps_sublabels():
    d = Dataset(np.zeros((3, 1)), labels=[0, 1, 2], label_names=("sitting", "running", "dancing"))
    r = regroup_dataset(d, ClassMap.from_names(d.label_names, HAD_GROUPS))
    np.testing.assert_array_equal(r.labels, [0, 1, 1])
    np.testing.assert_array_equal(r.aux_labels["sublabel"], [0, 1, 2])


def test_standardize_column():
    d = standardize(Dataset(np.array([[2.0, 5.0], [4.0, 5.0], [6.0, 5.0]])))
    col = d.points[:, 0]
    assert col.mean() == pytest.approx(0.0, abs=1e-15)
    assert col.var() == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_array_equal(d.points[:, 1], [0.0, 0.0, 0.0])


@given(arrays(np.float64, (12, 3), elements=st.floats(-1e3, 1e3, allow_nan=False)))
def test_standardize_idempotent(x):
    once = standardize(Dataset(x))
    twice = standardize(once)
    np.testing.assert_allclose(twice.points, once.points, rtol=0, atol=1e-12)
