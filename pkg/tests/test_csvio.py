import numpy as np
import pytest

from collinear_lens import DataError, Dataset, read_csv, write_csv

from conftest import FIXTURES


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestReadCSV:
    def test_well_formed(self, tmp_path):
        path = write(tmp_path,
                     "a,b,y\n1,2,3\n4,5,6\n7,8,9\n10,11,12\n13,14,15\n")
        ds = read_csv(path, "y")
        assert ds.n == 5 and ds.p == 2
        assert ds.names == ("a", "b", "y")
        np.testing.assert_array_equal(ds.y, [3.0, 6.0, 9.0, 12.0, 15.0])

    def test_nan_cell_rejected_with_location(self, tmp_path):
        path = write(tmp_path, "a,y\n1,2\nNaN,4\n")
        with pytest.raises(DataError, match=r"row 3, column 'a'"):
            read_csv(path, "y")

    def test_inf_cell_rejected(self, tmp_path):
        path = write(tmp_path, "a,y\n1,2\n3,inf\n")
        with pytest.raises(DataError, match=r"row 3, column 'y'"):
            read_csv(path, "y")

    def test_non_numeric_cell_named(self, tmp_path):
        path = write(tmp_path, "a,y\n1,2\nthree,4\n")
        with pytest.raises(DataError, match=r"row 3, column 'a'.*'three'"):
            read_csv(path, "y")

    def test_ragged_row_rejected(self, tmp_path):
        path = write(tmp_path, "a,b,y\n1,2,3\n4,5\n")
        with pytest.raises(DataError, match="row 3 has 2 cells"):
            read_csv(path, "y")

    def test_missing_response(self, tmp_path):
        path = write(tmp_path, "a,b\n1,2\n3,4\n")
        with pytest.raises(DataError, match="response"):
            read_csv(path, "z")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="not found"):
            read_csv(tmp_path / "nope.csv", "y")

    def test_empty_file(self, tmp_path):
        with pytest.raises(DataError, match="empty"):
            read_csv(write(tmp_path, ""), "y")

    def test_single_data_row_rejected(self, tmp_path):
        with pytest.raises(DataError, match="at least 2 data rows"):
            read_csv(write(tmp_path, "a,y\n1,2\n"), "y")

    def test_scientific_notation_accepted(self, tmp_path):
        path = write(tmp_path, "a,y\n1e-3,2.5E2\n-2e1,0.125\n")
        ds = read_csv(path, "y")
        np.testing.assert_array_equal(ds.column("a"), [1e-3, -20.0])

    def test_fixture_loads(self):
        ds = read_csv(FIXTURES / "bivariate.csv", "y")
        assert ds.n == 6 and ds.x_names == ("x1", "x2")


class TestRoundTrip:
    def test_write_read_identical(self, tmp_path, rng):
        values = rng.standard_normal((9, 3)) * np.array([1e-7, 1.0, 1e9])
        ds = Dataset.from_arrays(values[:, :2], values[:, 2],
                                 names=("alpha", "beta"), response="target")
        out = tmp_path / "round.csv"
        write_csv(ds, out)
        back = read_csv(out, "target")
        assert back.names == ds.names
        assert back.response == ds.response
        np.testing.assert_array_equal(back.values, ds.values)

    def test_double_round_trip_stable(self, tmp_path):
        ds = read_csv(FIXTURES / "bivariate.csv", "y")
        first = tmp_path / "first.csv"
        write_csv(ds, first)
        again = tmp_path / "again.csv"
        write_csv(read_csv(first, "y"), again)
        assert first.read_bytes() == again.read_bytes()
