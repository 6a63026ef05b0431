"""Dataset container and CSV round-trips."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csomtex import (
    DataError,
    Dataset,
    FormatError,
    UNLABELED,
    dataset_from_csv,
    dataset_to_csv,
    read_dataset,
    write_dataset,
)
from csomtex.data import format_value, require_labels


class TestDataset:
    def test_validation(self):
        with pytest.raises(ValueError):
            Dataset(np.zeros(3))
        with pytest.raises(ValueError):
            Dataset(np.array([[np.inf]]))
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 2)), np.array([1]))

    def test_class_ids_exclude_unlabeled(self):
        d = Dataset(np.zeros((4, 1)), np.array([3, UNLABELED, 0, 3]))
        assert d.class_ids.tolist() == [0, 3]
        assert not d.is_fully_labeled()
        assert Dataset(np.zeros((2, 1)), np.array([1, 1])).is_fully_labeled()

    def test_subset_and_without_labels(self):
        d = Dataset(np.arange(8, dtype=float).reshape(4, 2), np.array([0, 1, 0, 1]))
        s = d.subset([2, 0])
        np.testing.assert_array_equal(s.X, [[4.0, 5.0], [0.0, 1.0]])
        assert s.labels.tolist() == [0, 0]
        assert d.without_labels().labels is None

    def test_require_labels(self):
        with pytest.raises(DataError):
            require_labels(Dataset(np.zeros((1, 1)), None))
        with pytest.raises(DataError):
            require_labels(Dataset(np.zeros((2, 1)), np.array([0, UNLABELED])))


class TestCsv:
    def test_layout(self):
        d = Dataset(np.array([[1.5, -2.0]]), np.array([4]))
        text = dataset_to_csv(d)
        assert text == "f0,f1,label\n1.5,-2,4\n"

    def test_unlabeled_rows_have_empty_field(self):
        d = Dataset(np.array([[1.0], [2.0]]), np.array([0, UNLABELED]))
        lines = dataset_to_csv(d).splitlines()
        assert lines[1] == "1,0"
        assert lines[2] == "2,"

    def test_fully_unlabeled_loads_as_none(self):
        d = dataset_from_csv("f0,label\n1,\n2,\n")
        assert d.labels is None

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10_000), n=st.integers(1, 12), dim=st.integers(1, 6))
    def test_round_trip_is_exact(self, seed, n, dim):
        rng = np.random.default_rng(seed)
        X = rng.normal(scale=1e3, size=(n, dim)) * 10.0 ** rng.integers(-12, 12)
        labels = rng.integers(-1, 4, size=n)
        d = Dataset(X, None if (labels == UNLABELED).all() else labels)
        back = dataset_from_csv(dataset_to_csv(d))
        assert back == d

    def test_17g_round_trip_extremes(self):
        vals = [0.1, 1.0 / 3.0, -0.0, 1e-308, 1.7976931348623157e308]
        for v in vals:
            assert float(format_value(v)) == v

    def test_bad_inputs(self):
        with pytest.raises(FormatError):
            dataset_from_csv("")
        with pytest.raises(FormatError):
            dataset_from_csv("a,b\n1,2\n")
        with pytest.raises(FormatError):
            dataset_from_csv("f0,label\nx,1\n")
        with pytest.raises(FormatError):
            dataset_from_csv("f0,label\n1,2.5\n")
        with pytest.raises(FormatError):
            dataset_from_csv("f0,label\n1\n")
        with pytest.raises(FormatError):
            dataset_from_csv("f0,label\nnan,1\n")

    def test_file_round_trip(self, tmp_path):
        d = Dataset(np.array([[np.pi, np.e]]), np.array([2]))
        p = tmp_path / "d.csv"
        write_dataset(p, d)
        assert read_dataset(p) == d
        assert p.read_bytes().endswith(b"\n")
