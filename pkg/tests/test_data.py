import numpy as np
import pytest

from divcast.core import get_frequency
from divcast.data import ingest_long, ingest_m4, write_features_csv
from divcast.diversity import DiversityVector
from divcast.errors import (
    DuplicateId,
    MissingTestRow,
    NonContiguousIndex,
    UnparsableValue,
)
from divcast.sample import make_sample, write_sample_dataset


class TestIngestM4:
    def test_basic_parse(self, tmp_path):
        train = tmp_path / "train.csv"
        train.write_text("id,v1,v2,v3\nY1,5,6,7\n")
        series, actuals = ingest_m4(train, None, get_frequency("yearly"))
        assert len(series) == 1
        assert series[0].id == "Y1"
        assert len(series[0]) == 3
        assert series[0].horizon == 6

    def test_ragged_trailing_blanks(self, tmp_path):
        train = tmp_path / "train.csv"
        train.write_text("id,v1,v2,v3,v4\nY1,5,6,7,\nY2,1,2,3,4\n")
        series, _ = ingest_m4(train, None, get_frequency("yearly"))
        assert len(series[0]) == 3
        assert len(series[1]) == 4

    def test_duplicate_id(self, tmp_path):
        train = tmp_path / "train.csv"
        train.write_text("id,v1\nY1,5\nY1,6\n")
        with pytest.raises(DuplicateId):
            ingest_m4(train, None, get_frequency("yearly"))

    def test_unparsable_value_reports_position(self, tmp_path):
        train = tmp_path / "train.csv"
        train.write_text("id,v1,v2\nY1,5,abc\n")
        with pytest.raises(UnparsableValue, match="row 2"):
            ingest_m4(train, None, get_frequency("yearly"))

    def test_missing_test_row(self, tmp_path):
        train = tmp_path / "train.csv"
        test = tmp_path / "test.csv"
        train.write_text("id,v1,v2,v3\nY1,5,6,7\n")
        test.write_text("id,v1\nY2,8\n")
        with pytest.raises(MissingTestRow):
            ingest_m4(train, test, get_frequency("yearly"))

    def test_test_rows_aligned(self, tmp_path):
        train = tmp_path / "train.csv"
        test = tmp_path / "test.csv"
        train.write_text("id,v1,v2,v3\nY1,5,6,7\nY2,1,2,3\n")
        test.write_text("id,v1,v2\nY2,9,9\nY1,8,8\n")
        series, actuals = ingest_m4(train, test, get_frequency("yearly"), horizon=2)
        assert set(actuals) == {"Y1", "Y2"}
        assert np.array_equal(actuals["Y1"], [8, 8])

    def test_too_short_series_dropped(self, tmp_path):
        train = tmp_path / "train.csv"
        train.write_text("id,v1,v2,v3\nM1,5,6,7\n")
        series, _ = ingest_m4(train, None, get_frequency("monthly"))
        assert series == []


class TestIngestLong:
    def test_interleaved_ids(self, tmp_path):
        path = tmp_path / "long.csv"
        path.write_text(
            "id,index,value\nA,1,10\nB,1,20\nA,2,11\nB,2,21\nA,3,12\nB,3,22\n"
        )
        series = ingest_long(path, get_frequency("yearly"))
        assert [s.id for s in series] == ["A", "B"]
        assert np.array_equal(series[0].values, [10, 11, 12])

    def test_gap_in_index(self, tmp_path):
        path = tmp_path / "long.csv"
        path.write_text("id,index,value\nA,1,10\nA,3,12\nA,4,13\n")
        with pytest.raises(NonContiguousIndex):
            ingest_long(path, get_frequency("yearly"))

    def test_single_row_rejected_by_minimum(self, tmp_path):
        path = tmp_path / "long.csv"
        path.write_text("id,index,value\nA,1,10\n")
        series = ingest_long(path, get_frequency("yearly"))
        assert series == []


class TestSample:
    def test_sample_is_100_series(self):
        series, actuals = make_sample(seed=1)
        assert len(series) == 100
        assert set(actuals) == {s.id for s in series}
        for s in series:
            assert actuals[s.id].shape == (s.horizon,)
            assert np.all(s.values > 0)

    def test_sample_deterministic(self):
        s1, _ = make_sample(seed=1)
        s2, _ = make_sample(seed=1)
        for a, b in zip(s1, s2):
            assert np.array_equal(a.values, b.values)

    def test_bundled_csvs_round_trip(self, tmp_path):
        write_sample_dataset(tmp_path, seed=1)
        series, actuals = make_sample(seed=1)
        loaded, loaded_actuals = ingest_m4(
            tmp_path / "monthly_train.csv", tmp_path / "monthly_test.csv",
            get_frequency("monthly"),
        )
        originals = {s.id: s for s in series if s.frequency.label == "monthly"}
        assert {s.id for s in loaded} == set(originals)
        for s in loaded:
            assert np.array_equal(s.values, originals[s.id].values)
            assert np.array_equal(loaded_actuals[s.id], actuals[s.id])


class TestWriters:
    def test_features_csv_sorted(self, tmp_path):
        vecs = [
            DiversityVector("B", np.array([1.0]), np.array([0.0])),
            DiversityVector("A", np.array([1.0]), np.array([1.0])),
        ]
        path = tmp_path / "features.csv"
        write_features_csv(path, vecs, ("m1", "m2"))
        lines = path.read_text().splitlines()
        assert lines[0] == "series_id,u_1_2,l_1_2"
        assert lines[1].startswith("A,")
        assert lines[2].startswith("B,")
