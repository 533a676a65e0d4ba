import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphforge import (
    ClassBalanceSpec,
    DataError,
    PointSet,
    ScalerParams,
    dedup,
    load_csv,
    standardize_fit_transform,
    stratified_downsample,
    train_test_split,
)


class TestLoadCsv:
    def test_basic_labeled_file(self, write_csv):
        path = write_csv("t.csv", ["f1", "f2", "label"], [(1.0, 2.0, "x"), (3.0, 4.0, "y"), (5.0, 6.0, "x")])
        ps = load_csv(path, label_column="label")
        assert ps.n == 3 and ps.d == 2
        assert ps.labels is not None and list(ps.labels) == ["x", "y", "x"]
        assert list(ps.row_ids) == [0, 1, 2]
        np.testing.assert_array_equal(ps.features, [[1, 2], [3, 4], [5, 6]])

    def test_header_only_is_an_error(self, write_csv):
        path = write_csv("empty.csv", ["a", "b"], [])
        with pytest.raises(DataError, match="no data rows"):
            load_csv(path)

    def test_nan_cell_names_row_and_column(self, write_csv):
        path = write_csv("nan.csv", ["a", "b"], [(1.0, 2.0), (3.0, "NaN")])
        with pytest.raises(DataError, match=r"row 1.*'b'"):
            load_csv(path)

    def test_non_numeric_cell_names_row_and_column(self, write_csv):
        path = write_csv("bad.csv", ["a", "b"], [(1.0, 2.0), ("oops", 4.0)])
        with pytest.raises(DataError, match=r"'oops'.*row 1.*'a'"):
            load_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            load_csv(tmp_path / "nope.csv")

    def test_missing_label_column(self, write_csv):
        path = write_csv("t.csv", ["a", "b"], [(1, 2)])
        with pytest.raises(DataError, match="label column"):
            load_csv(path, label_column="label")

    def test_ragged_row_reported(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("a,b\n1,2\n3\n")
        with pytest.raises(DataError, match="columns"):
            load_csv(path)

    def test_custom_delimiter(self, tmp_path):
        path = tmp_path / "semi.csv"
        path.write_text("a;b\n1;2\n")
        ps = load_csv(path, delimiter=";")
        assert ps.n == 1 and ps.d == 2


class TestDedup:
    def test_exact_duplicate_keeps_first(self):
        ps = PointSet(features=[[1, 2], [1, 2], [3, 4]])
        out = dedup(ps)
        np.testing.assert_array_equal(out.features, [[1, 2], [3, 4]])
        assert list(out.row_ids) == [0, 2]
        assert out.dedup_applied

    def test_equality_includes_label(self):
        ps = PointSet(features=[[1, 2], [1, 2]], labels=np.array(["A", "B"]))
        out = dedup(ps)
        assert out.n == 2

    def test_already_unique_unchanged(self):
        ps = PointSet(features=[[1, 2], [3, 4]])
        out = dedup(ps)
        np.testing.assert_array_equal(out.features, ps.features)
        np.testing.assert_array_equal(out.row_ids, ps.row_ids)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(0, 3), st.integers(0, 3)),
            min_size=1,
            max_size=40,
        )
    )
    def test_idempotent(self, rows):
        ps = PointSet(features=np.array(rows, dtype=float))
        once = dedup(ps)
        twice = dedup(once)
        np.testing.assert_array_equal(once.features, twice.features)
        np.testing.assert_array_equal(once.row_ids, twice.row_ids)


class TestStratifiedDownsample:
    def _labeled(self, rng, counts):
        labels = np.concatenate([[cls] * cnt for cls, cnt in counts.items()])
        feats = rng.random((len(labels), 3))
        return PointSet(features=feats, labels=labels)

    def test_exact_counts(self, rng):
        ps = self._labeled(rng, {"A": 100, "B": 100})
        out = stratified_downsample(ps, ClassBalanceSpec(targets={"A": 10, "B": 5}, seed=7))
        assert out.class_counts() == {"A": 10, "B": 5}

    def test_deterministic_given_seed(self, rng):
        ps = self._labeled(rng, {"A": 100, "B": 100})
        spec = ClassBalanceSpec(targets={"A": 10, "B": 5}, seed=7)
        first = stratified_downsample(ps, spec)
        second = stratified_downsample(ps, spec)
        np.testing.assert_array_equal(first.row_ids, second.row_ids)

    def test_target_exceeds_available(self, rng):
        ps = self._labeled(rng, {"A": 100})
        with pytest.raises(DataError, match="target exceeds available"):
            stratified_downsample(ps, ClassBalanceSpec(targets={"A": 101}, seed=0))

    def test_unknown_class(self, rng):
        ps = self._labeled(rng, {"A": 10})
        with pytest.raises(DataError, match="unknown class"):
            stratified_downsample(ps, ClassBalanceSpec(targets={"Z": 1}, seed=0))

    def test_order_preserved(self, rng):
        ps = self._labeled(rng, {"A": 50, "B": 50})
        out = stratified_downsample(ps, ClassBalanceSpec(targets={"A": 20, "B": 20}, seed=3))
        assert (np.diff(out.row_ids) > 0).all()


class TestTrainTestSplit:
    def _two_class(self, rng, per_class=500):
        labels = np.array(["A"] * per_class + ["B"] * per_class)
        return PointSet(features=rng.random((2 * per_class, 2)), labels=labels)

    def test_four_to_one_ratio(self, rng):
        ps = self._two_class(rng)
        train, test = train_test_split(ps, 0.2, seed=0)
        assert test.class_counts() == {"A": 100, "B": 100}
        assert train.class_counts() == {"A": 400, "B": 400}

    def test_partition_over_many_seeds(self, rng):
        ps = self._two_class(rng, per_class=30)
        all_ids = set(ps.row_ids.tolist())
        for seed in range(50):
            train, test = train_test_split(ps, 0.2, seed=seed)
            train_ids = set(train.row_ids.tolist())
            test_ids = set(test.row_ids.tolist())
            assert train_ids & test_ids == set()
            assert train_ids | test_ids == all_ids

    def test_single_class_rounding(self, rng):
        # hand enumeration: round(0.2 * 10) = 2 test rows, 8 train rows
        ps = PointSet(features=rng.random((10, 2)), labels=np.array(["A"] * 10))
        train, test = train_test_split(ps, 0.2, seed=1)
        assert (train.n, test.n) == (8, 2)

    def test_bad_fraction(self, rng):
        ps = self._two_class(rng, per_class=5)
        for frac in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DataError):
                train_test_split(ps, frac, seed=0)

    @settings(max_examples=30, deadline=None)
    @given(
        n_a=st.integers(3, 40),
        n_b=st.integers(3, 40),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_partition_property(self, n_a, n_b, seed):
        labels = np.array(["A"] * n_a + ["B"] * n_b)
        feats = np.arange((n_a + n_b) * 2, dtype=float).reshape(-1, 2)
        ps = PointSet(features=feats, labels=labels)
        train, test = train_test_split(ps, 0.25, seed=seed)
        assert set(train.row_ids) | set(test.row_ids) == set(ps.row_ids)
        assert not (set(train.row_ids) & set(test.row_ids))


class TestStandardize:
    def test_minmax_definition(self):
        train = PointSet(features=[[0.0], [5.0], [10.0]], labels=np.array(list("abc")))
        test = PointSet(features=[[2.5]], labels=np.array(["a"]))
        strain, stest, params = standardize_fit_transform(train, test)
        np.testing.assert_allclose(strain.features.ravel(), [0.0, 0.5, 1.0])
        np.testing.assert_allclose(stest.features.ravel(), [0.25])

    def test_constant_column_maps_to_zero(self):
        train = PointSet(features=[[7.0], [7.0]])
        test = PointSet(features=[[7.0]])
        strain, stest, _ = standardize_fit_transform(train, test)
        assert (strain.features == 0).all() and (stest.features == 0).all()

    def test_no_clipping_outside_train_range(self):
        train = PointSet(features=[[0.0], [10.0]])
        test = PointSet(features=[[12.0]])
        _, stest, _ = standardize_fit_transform(train, test)
        np.testing.assert_allclose(stest.features.ravel(), [1.2])

    def test_params_json_roundtrip(self):
        train = PointSet(features=[[0.0, 1.0], [10.0, 3.0]])
        test = PointSet(features=[[5.0, 2.0]])
        _, _, params = standardize_fit_transform(train, test)
        restored = ScalerParams.from_json(params.to_json())
        np.testing.assert_array_equal(restored.mins, params.mins)
        np.testing.assert_array_equal(restored.maxs, params.maxs)
        np.testing.assert_allclose(restored.transform(test.features), [[0.5, 0.5]])


class TestPointSetInvariants:
    def test_duplicate_row_ids_rejected(self):
        with pytest.raises(DataError, match="unique"):
            PointSet(features=[[1.0], [2.0]], row_ids=[0, 0])

    def test_label_length_mismatch_rejected(self):
        with pytest.raises(DataError, match="labels"):
            PointSet(features=[[1.0], [2.0]], labels=np.array(["a"]))

    def test_empty_feature_matrix_rejected(self):
        with pytest.raises(DataError):
            PointSet(features=np.empty((3, 0)))
