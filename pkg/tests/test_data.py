import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collinear_lens import CenteredData, DataError, Dataset, center
from collinear_lens.data import center_column


class TestCenterColumn:
    def test_symmetric_column(self):
        centered, mean = center_column([1.0, 2.0, 3.0])
        assert mean == 2.0
        np.testing.assert_array_equal(centered, [-1.0, 0.0, 1.0])

    def test_constant_column_centers_to_zero(self):
        centered, mean = center_column([5.0, 5.0, 5.0])
        assert mean == 5.0
        np.testing.assert_array_equal(centered, [0.0, 0.0, 0.0])

    def test_hand_arithmetic(self):
        # mean of (1, 2, 4, 9) is 4
        centered, mean = center_column([1.0, 2.0, 4.0, 9.0])
        assert mean == 4.0
        np.testing.assert_array_equal(centered, [-3.0, -2.0, 0.0, 5.0])

    def test_too_short(self):
        with pytest.raises(DataError, match="at least 2"):
            center_column([1.0])


class TestDatasetValidation:
    def test_non_finite_rejected_with_column_name(self):
        with pytest.raises(DataError, match="'b'"):
            Dataset([("a", [1.0, 2.0]), ("b", [np.nan, 0.0]),
                     ("y", [1.0, 2.0])], "y")

    def test_inf_rejected(self):
        with pytest.raises(DataError, match="'a'"):
            Dataset([("a", [np.inf, 2.0]), ("y", [1.0, 2.0])], "y")

    def test_duplicate_names(self):
        with pytest.raises(DataError, match="duplicate"):
            Dataset([("a", [1.0, 2.0]), ("a", [1.0, 2.0]),
                     ("y", [0.0, 1.0])], "y")

    def test_missing_response(self):
        with pytest.raises(DataError, match="response"):
            Dataset([("a", [1.0, 2.0])], "y")

    def test_length_mismatch(self):
        with pytest.raises(DataError, match="length"):
            Dataset([("a", [1.0, 2.0]), ("y", [1.0, 2.0, 3.0])], "y")

    def test_too_few_rows(self):
        with pytest.raises(DataError, match="at least 2"):
            Dataset([("a", [1.0]), ("y", [2.0])], "y")

    def test_column_access_and_order(self):
        ds = Dataset([("a", [1.0, 2.0]), ("y", [3.0, 4.0]),
                      ("b", [5.0, 6.0])], "y")
        assert ds.names == ("a", "y", "b")
        assert ds.x_names == ("a", "b")
        assert ds.n == 2 and ds.p == 2
        np.testing.assert_array_equal(ds.y, [3.0, 4.0])
        np.testing.assert_array_equal(ds.X[:, 1], [5.0, 6.0])

    def test_values_are_read_only(self):
        ds = Dataset([("a", [1.0, 2.0]), ("y", [3.0, 4.0])], "y")
        with pytest.raises(ValueError):
            ds.values[0, 0] = 99.0

    def test_drop(self):
        ds = Dataset([("a", [1.0, 2.0]), ("b", [0.0, 1.0]),
                      ("y", [3.0, 4.0])], "y")
        reduced = ds.drop("a")
        assert reduced.x_names == ("b",)
        with pytest.raises(DataError):
            ds.drop("y")

    def test_from_arrays_name_generation(self):
        ds = Dataset.from_arrays([[1.0, 2.0], [3.0, 4.0], [5.0, 7.0]],
                                 [1.0, 2.0, 3.0])
        assert ds.x_names == ("x1", "x2")
        assert ds.response == "y"


class TestCenter:
    def test_means_recorded(self):
        ds = Dataset([("a", [1.0, 2.0, 3.0]), ("y", [2.0, 4.0, 9.0])], "y")
        cd = center(ds)
        assert cd.y_mean == 5.0
        np.testing.assert_array_equal(cd.x_means, [2.0])
        np.testing.assert_array_equal(cd.x[:, 0], [-1.0, 0.0, 1.0])

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=3,
                    max_size=40))
    @settings(max_examples=50, deadline=None)
    def test_centered_columns_sum_to_zero(self, values):
        n = len(values)
        cd = CenteredData.from_arrays(
            np.array(values).reshape(-1, 1), np.arange(n, dtype=float)
        )
        scale = max(1.0, np.max(np.abs(values)))
        assert abs(cd.x.sum()) <= 1e-9 * n * scale
        assert abs(cd.y.sum()) <= 1e-9 * n * n

    def test_requires_more_rows_than_columns(self):
        with pytest.raises(DataError, match="n > p"):
            CenteredData.from_arrays(np.eye(2), np.array([1.0, 2.0]))


class TestDifferenced:
    def test_telescoping(self, rng):
        values = rng.standard_normal(15)
        ds = Dataset([("a", values), ("y", rng.standard_normal(15))], "y")
        diffed = ds.differenced()
        assert diffed.n == 14
        np.testing.assert_allclose(diffed.column("a").sum(),
                                   values[-1] - values[0], atol=1e-12)

    def test_needs_three_rows(self):
        ds = Dataset([("a", [1.0, 2.0]), ("y", [0.0, 1.0])], "y")
        with pytest.raises(DataError, match="at least 3"):
            ds.differenced()
