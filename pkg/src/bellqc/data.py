"""CSV ingestion, binary class selection and stratified seeded splits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .classifier import Label
from .errors import InvalidInputError, ParseError

# Class numbering used throughout: setosa 0, virginica 1, versicolor 2.
IRIS_CLASSES = {"setosa": 0, "virginica": 1, "versicolor": 2}
IRIS_SHA256 = "9cc1c345c71bcc9b486b74cbf6063fa66f4bb5e0f603a4b3c3471ec2e5e8e355"


def iris_path():
    """Path to the bundled Fisher Iris CSV (150 rows, named species column)."""
    return Path(str(resources.files("bellqc") / "datasets" / "iris.csv"))


@dataclass(frozen=True, eq=False)
class Sample:
    features: np.ndarray
    class_id: int


@dataclass(eq=False)
class Dataset:
    samples: list
    class_names: dict
    feature_dim: int
    # Set by select_binary: the class whose samples carry Label.PLUS.
    positive_class: int | None = field(default=None)

    def __post_init__(self):
        if not self.samples:
            raise InvalidInputError("dataset is empty")
        for s in self.samples:
            if s.features.shape != (self.feature_dim,):
                raise InvalidInputError("samples disagree on feature dimension")

    def __len__(self):
        return len(self.samples)

    @property
    def classes(self):
        return sorted({s.class_id for s in self.samples})

    def count(self, class_id):
        return sum(1 for s in self.samples if s.class_id == class_id)

    def features(self):
        return np.array([s.features for s in self.samples])

    def label_of(self, sample):
        if self.positive_class is None:
            raise InvalidInputError("dataset has no binary orientation; use select_binary")
        return Label.PLUS if sample.class_id == self.positive_class else Label.MINUS

    def labelled(self):
        """``[(features, Label), ...]`` in sample order."""
        return [(s.features, self.label_of(s)) for s in self.samples]

    def by_label(self):
        """Feature matrices ``(X_plus, X_minus)``."""
        plus = [s.features for s in self.samples if self.label_of(s) is Label.PLUS]
        minus = [s.features for s in self.samples if self.label_of(s) is Label.MINUS]
        d = self.feature_dim
        return np.array(plus).reshape(-1, d), np.array(minus).reshape(-1, d)

    def with_features(self, X):
        X = np.asarray(X, dtype=np.float64)
        samples = [Sample(row.copy(), s.class_id) for row, s in zip(X, self.samples)]
        return Dataset(samples, dict(self.class_names), X.shape[1], self.positive_class)


@dataclass(frozen=True)
class CsvSchema:
    """How to read a dataset file.

    ``class_map`` maps lower-cased class names to ids; integer class cells are
    taken as ids directly.  ``feature_dim`` pins the expected number of feature
    columns, otherwise the first data row decides.
    """

    class_map: dict = field(default_factory=lambda: dict(IRIS_CLASSES))
    feature_dim: int | None = None


def _parse_float(cell):
    try:
        v = float(cell)
    except ValueError:
        return None
    return v


def _class_id(cell, schema, line, path):
    text = cell.strip()
    try:
        return int(text)
    except ValueError:
        pass
    key = text.lower()
    if key.startswith("iris-"):
        key = key[len("iris-"):]
    if key not in schema.class_map:
        raise ParseError(f"unknown class {text!r}", line=line, path=path)
    return schema.class_map[key]


def load_csv(path, schema: CsvSchema | None = None) -> Dataset:
    schema = schema or CsvSchema()
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [(i, row) for i, row in enumerate(csv.reader(fh), start=1)]
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror or exc}", path=path) from exc
    except UnicodeDecodeError as exc:
        raise ParseError("file is not valid UTF-8", path=path) from exc

    rows = [(i, [c.strip() for c in row]) for i, row in rows if any(c.strip() for c in row)]
    if not rows:
        raise ParseError("file contains no rows", path=path)
    first_line, first = rows[0]
    if any(_parse_float(c) is None for c in first[:-1]):
        rows = rows[1:]  # header
    if not rows:
        raise ParseError("file contains a header but no data", path=path)

    d = schema.feature_dim if schema.feature_dim is not None else len(rows[0][1]) - 1
    if d < 1:
        raise ParseError("rows need at least one feature and a class column", line=rows[0][0], path=path)

    samples = []
    for line, row in rows:
        if len(row) != d + 1:
            raise ParseError(
                f"expected {d} features and a class column, got {len(row)} fields",
                line=line, path=path,
            )
        values = [_parse_float(c) for c in row[:-1]]
        if any(v is None or not math.isfinite(v) for v in values):
            raise ParseError("non-numeric or non-finite feature value", line=line, path=path)
        samples.append(Sample(np.array(values, dtype=np.float64), _class_id(row[-1], schema, line, path)))

    names = {v: k for k, v in schema.class_map.items()}
    class_names = {c: names.get(c, str(c)) for c in sorted({s.class_id for s in samples})}
    return Dataset(samples, class_names, d)


def select_binary(ds: Dataset, class_a: int, class_b: int) -> Dataset:
    """Keep two classes; ``class_a`` samples become PLUS, ``class_b`` MINUS."""
    if class_a == class_b:
        raise InvalidInputError("the two classes must be distinct")
    present = set(ds.classes)
    for c in (class_a, class_b):
        if c not in present:
            raise InvalidInputError(f"class {c} not present in dataset")
    samples = [s for s in ds.samples if s.class_id in (class_a, class_b)]
    names = {c: ds.class_names.get(c, str(c)) for c in (class_a, class_b)}
    return Dataset(samples, names, ds.feature_dim, positive_class=class_a)


@dataclass(frozen=True)
class SplitSpec:
    train_per_class: int = 40
    test_per_class: int = 10
    seed: int = 0


def split(ds: Dataset, spec: SplitSpec):
    """Stratified seeded split; returns ``(train, test)`` with disjoint samples."""
    if spec.train_per_class < 1 or spec.test_per_class < 0:
        raise InvalidInputError("need train_per_class >= 1 and test_per_class >= 0")
    rng = np.random.default_rng(spec.seed)
    train_idx, test_idx = [], []
    for c in ds.classes:
        idx = np.array([i for i, s in enumerate(ds.samples) if s.class_id == c])
        need = spec.train_per_class + spec.test_per_class
        if need > idx.size:
            raise InvalidInputError(f"class {c} has {idx.size} samples, split needs {need}")
        perm = idx[rng.permutation(idx.size)]
        train_idx.extend(perm[: spec.train_per_class].tolist())
        test_idx.extend(perm[spec.train_per_class:need].tolist())

    def subset(indices):
        return Dataset([ds.samples[i] for i in sorted(indices)], dict(ds.class_names),
                       ds.feature_dim, ds.positive_class)

    train = subset(train_idx)
    test = subset(test_idx) if test_idx else None
    return train, test
