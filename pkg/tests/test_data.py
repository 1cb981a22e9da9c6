import hashlib

import numpy as np
import pytest

from bellqc import data
from bellqc.classifier import Label
from bellqc.errors import InvalidInputError, ParseError


def test_bundled_iris_checksum():
    digest = hashlib.sha256(data.iris_path().read_bytes()).hexdigest()
    assert digest == data.IRIS_SHA256


def test_iris_shape(iris):
    assert len(iris) == 150 and iris.feature_dim == 4
    assert [iris.count(c) for c in (0, 1, 2)] == [50, 50, 50]
    assert iris.class_names == {0: "setosa", 1: "virginica", 2: "versicolor"}


def test_iris_class_numbering(iris):
    # Petal length separates setosa (< 2 cm) from the other two species.
    setosa = [s for s in iris.samples if s.class_id == 0]
    assert all(s.features[2] < 2.0 for s in setosa)
    virginica_mean = np.mean([s.features[2] for s in iris.samples if s.class_id == 1])
    versicolor_mean = np.mean([s.features[2] for s in iris.samples if s.class_id == 2])
    assert virginica_mean > versicolor_mean


def write(tmp_path, text, name="d.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_headerless_integer_classes(self, tmp_path):
        ds = data.load_csv(write(tmp_path, "1,2,3,0\n4,5,6,1\n"))
        assert ds.feature_dim == 3 and [s.class_id for s in ds.samples] == [0, 1]

    def test_header_and_prefixed_names(self, tmp_path):
        ds = data.load_csv(write(tmp_path, "a,b,c,d,species\n1,2,3,4,Iris-setosa\n1,2,3,4,Iris-versicolor\n"))
        assert [s.class_id for s in ds.samples] == [0, 2]

    def test_blank_lines_skipped(self, tmp_path):
        ds = data.load_csv(write(tmp_path, "1,2,0\n\n3,4,1\n\n"))
        assert len(ds) == 2

    def test_empty_file(self, tmp_path):
        with pytest.raises(ParseError):
            data.load_csv(write(tmp_path, ""))

    def test_header_only(self, tmp_path):
        with pytest.raises(ParseError):
            data.load_csv(write(tmp_path, "a,b,class\n"))

    def test_short_row_names_line(self, tmp_path):
        text = "1,2,3,4,setosa\n1,2,3,4,setosa\n1,2,3,virginica\n"
        with pytest.raises(ParseError, match="3") as info:
            data.load_csv(write(tmp_path, text))
        assert info.value.line == 3

    def test_non_numeric_feature(self, tmp_path):
        with pytest.raises(ParseError) as info:
            data.load_csv(write(tmp_path, "1,2,setosa\n1,x,setosa\n"))
        assert info.value.line == 2

    def test_unknown_class(self, tmp_path):
        with pytest.raises(ParseError) as info:
            data.load_csv(write(tmp_path, "1,2,setosa\n1,2,rose\n"))
        assert info.value.line == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            data.load_csv(tmp_path / "absent.csv")

    def test_schema_dim(self, tmp_path):
        with pytest.raises(ParseError):
            data.load_csv(write(tmp_path, "1,2,3,0\n"), data.CsvSchema(feature_dim=4))

    def test_custom_class_map(self, tmp_path):
        ds = data.load_csv(write(tmp_path, "1,cat\n2,dog\n"), data.CsvSchema(class_map={"cat": 5, "dog": 7}))
        assert ds.class_names == {5: "cat", 7: "dog"}


class TestSelectBinary:
    def test_counts(self, iris):
        assert len(data.select_binary(iris, 0, 1)) == 100

    def test_same_class(self, iris):
        with pytest.raises(InvalidInputError):
            data.select_binary(iris, 0, 0)

    def test_missing_class(self, iris):
        with pytest.raises(InvalidInputError):
            data.select_binary(iris, 0, 3)

    def test_orientation(self, iris):
        ds = data.select_binary(iris, 2, 1)
        for x, label in zip(ds.samples, ds.labelled()):
            assert label[1] is (Label.PLUS if x.class_id == 2 else Label.MINUS)
        Xp, Xm = ds.by_label()
        assert Xp.shape == Xm.shape == (50, 4)

    def test_unoriented_dataset(self, iris):
        with pytest.raises(InvalidInputError):
            iris.labelled()


class TestSplit:
    def test_counts(self, iris):
        tr, te = data.split(data.select_binary(iris, 0, 1), data.SplitSpec(40, 10, 0))
        assert len(tr) == 80 and len(te) == 20
        assert tr.count(0) == tr.count(1) == 40 and te.count(0) == te.count(1) == 10

    def test_deterministic(self, iris):
        ds = data.select_binary(iris, 1, 2)
        a = data.split(ds, data.SplitSpec(40, 10, 9))
        b = data.split(ds, data.SplitSpec(40, 10, 9))
        for x, y in zip(a, b):
            assert [id(s) for s in x.samples] == [id(s) for s in y.samples]

    def test_seed_changes_membership(self, iris):
        ds = data.select_binary(iris, 1, 2)
        a, _ = data.split(ds, data.SplitSpec(40, 10, 1))
        b, _ = data.split(ds, data.SplitSpec(40, 10, 2))
        assert {id(s) for s in a.samples} != {id(s) for s in b.samples}

    @pytest.mark.parametrize("seed", range(5))
    def test_disjoint_and_stratified(self, iris, seed):
        ds = data.select_binary(iris, 0, 2)
        tr, te = data.split(ds, data.SplitSpec(30, 15, seed))
        assert not {id(s) for s in tr.samples} & {id(s) for s in te.samples}
        assert tr.count(0) == tr.count(2) == 30 and te.count(0) == te.count(2) == 15
        assert tr.positive_class == 0

    def test_unsatisfiable(self, iris):
        with pytest.raises(InvalidInputError):
            data.split(data.select_binary(iris, 0, 1), data.SplitSpec(45, 10, 0))

    def test_no_test_set(self, iris):
        tr, te = data.split(data.select_binary(iris, 0, 1), data.SplitSpec(50, 0, 0))
        assert len(tr) == 100 and te is None
