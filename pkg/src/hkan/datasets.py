"""Dataset loading, min-max scaling, splitting and synthetic target functions."""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, DimensionMismatch, EmptyDataset, InvalidInput, ParseError


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    column_names: list = field(default_factory=list)
    source: str = ""

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64).ravel()
        if X.ndim != 2:
            raise DimensionMismatch(f"X must be 2-D, got shape {X.shape}")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise EmptyDataset(f"dataset needs at least one row and one input, got shape {X.shape}")
        if y.size != X.shape[0]:
            raise DimensionMismatch(f"X has {X.shape[0]} rows but y has {y.size}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise InvalidInput("dataset contains NaN or infinite values")
        names = list(self.column_names) or [f"x{i + 1}" for i in range(X.shape[1])]
        if len(names) != X.shape[1]:
            raise DimensionMismatch(f"{len(names)} column names for {X.shape[1]} inputs")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_names", names)

    @property
    def n_samples(self):
        return self.X.shape[0]

    @property
    def n_inputs(self):
        return self.X.shape[1]

    def subset(self, idx):
        return Dataset(self.X[idx], self.y[idx], self.column_names, self.source)


@dataclass(frozen=True, eq=False)
class NormStats:
    """Per-column min/max of the inputs and min/max of the target."""

    x_min: np.ndarray
    x_max: np.ndarray
    y_min: float
    y_max: float

    def __post_init__(self):
        object.__setattr__(self, "x_min", np.asarray(self.x_min, dtype=np.float64).ravel())
        object.__setattr__(self, "x_max", np.asarray(self.x_max, dtype=np.float64).ravel())
        object.__setattr__(self, "y_min", float(self.y_min))
        object.__setattr__(self, "y_max", float(self.y_max))

    @classmethod
    def identity(cls, n_inputs):
        """Statistics that leave data unchanged."""
        return cls(np.zeros(n_inputs), np.ones(n_inputs), 0.0, 1.0)

    @staticmethod
    def _scale(v, lo, hi):
        span = hi - lo
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, (v - lo) / safe, 0.0)

    def transform_X(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.x_min.size:
            raise DimensionMismatch(
                f"expected {self.x_min.size} input columns, got array of shape {X.shape}"
            )
        return self._scale(X, self.x_min, self.x_max)

    def transform_y(self, y):
        return self._scale(np.asarray(y, dtype=np.float64), self.y_min, self.y_max)

    def inverse_y(self, y):
        return self.y_min + np.asarray(y, dtype=np.float64) * (self.y_max - self.y_min)

    def inverse_X(self, X):
        return self.x_min + np.asarray(X, dtype=np.float64) * (self.x_max - self.x_min)

    def to_dict(self):
        return {
            "x_min": [float(v) for v in self.x_min],
            "x_max": [float(v) for v in self.x_max],
            "y_min": self.y_min,
            "y_max": self.y_max,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["x_min"], d["x_max"], d["y_min"], d["y_max"])


def fit_normalization(train):
    return NormStats(train.X.min(axis=0), train.X.max(axis=0), train.y.min(), train.y.max())


def apply_normalization(ds, stats):
    """Min-max scale ``ds`` with statistics fitted elsewhere (values may leave [0, 1])."""
    return Dataset(stats.transform_X(ds.X), stats.transform_y(ds.y), ds.column_names, ds.source)


def read_table(path, min_columns=1):
    """Parse a numeric CSV with one header row into ``(header, values)``."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    if not rows:
        raise EmptyDataset(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if len(header) < min_columns:
        raise DataError(f"{path}: need at least {min_columns} columns, found {len(header)}")
    if not rows[1:]:
        raise EmptyDataset(f"{path}: header only, no data rows")
    values = np.empty((len(rows) - 1, len(header)), dtype=np.float64)
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != len(header):
            raise ParseError(f"{path}: row {line} has {len(row)} fields, expected {len(header)}")
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {line}, column {header[j]!r}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: row {line}, column {header[j]!r}: non-finite value {cell!r}")
            values[i, j] = v
    return header, values


def load_csv(path, target_column=None):
    """Read a numeric CSV with one header row.

    The column named ``target_column`` (default: the last column) becomes the
    target; every other column is an input. Rows are numbered from 1 with the
    header as row 1 in error messages.
    """
    header, values = read_table(path, min_columns=2)
    if target_column is None:
        t = len(header) - 1
    elif target_column in header:
        t = header.index(target_column)
    else:
        raise DataError(f"{path}: target column {target_column!r} not in header {header}")
    inputs = [j for j in range(len(header)) if j != t]
    return Dataset(values[:, inputs], values[:, t], [header[j] for j in inputs], str(path))


def save_csv(ds, path, target_name="y"):
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(ds.column_names) + [target_name])
        for xi, yi in zip(ds.X, ds.y):
            w.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


def split(ds, train_fraction, seed):
    """Shuffle with ``seed`` and cut into (train, test)."""
    if not 0.0 < train_fraction < 1.0:
        raise InvalidInput(f"train_fraction must lie in (0, 1), got {train_fraction}")
    n = ds.n_samples
    if n < 2:
        raise InvalidInput("need at least two samples to split")
    n_train = min(max(int(round(train_fraction * n)), 1), n - 1)
    perm = np.random.default_rng(seed).permutation(n)
    return ds.subset(np.sort(perm[:n_train])), ds.subset(np.sort(perm[n_train:]))


ABALONE_COLUMNS = ["sex", "length", "diameter", "height", "whole_weight", "shucked_weight",
                   "viscera_weight", "shell_weight", "rings"]
ABALONE_SEX_CODES = {"M": 1.0, "F": 2.0, "I": 3.0}


def load_abalone(path):
    """Read the Abalone data in the UCI ``abalone.data`` layout.

    Nine comma-separated fields per row, target (rings) last. The sex field
    may be the letter M, F or I (coded 1, 2, 3) or already numeric. A header
    row is skipped if present.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    first = 1
    if rows and rows[0][0].strip().upper() not in ABALONE_SEX_CODES:
        try:
            float(rows[0][0])
        except ValueError:
            rows, first = rows[1:], 2
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")
    values = np.empty((len(rows), len(ABALONE_COLUMNS)), dtype=np.float64)
    for i, row in enumerate(rows):
        if len(row) != len(ABALONE_COLUMNS):
            raise ParseError(f"{path}: row {i + first} has {len(row)} fields, expected {len(ABALONE_COLUMNS)}")
        cells = [c.strip() for c in row]
        try:
            sex = ABALONE_SEX_CODES.get(cells[0].upper())
            values[i] = [float(cells[0]) if sex is None else sex] + [float(c) for c in cells[1:]]
        except ValueError:
            raise ParseError(f"{path}: row {i + first}: non-numeric field in {row}") from None
    return Dataset(values[:, :-1], values[:, -1], ABALONE_COLUMNS[:-1], str(path))


# --- synthetic target functions -------------------------------------------

def tf1(X):
    return (2 * X[:, 0] - 1) * (2 * X[:, 1] - 1)


def tf2(X):
    return np.sum(np.sin(20 * np.exp(X)) * X**2, axis=1)


def tf3(X):
    return -np.sum(X * np.sin(np.sqrt(np.abs(X))), axis=1)


def tf4(X):
    r = np.sqrt(np.sum(X**2, axis=1))
    return 1 - np.cos(2 * np.pi * r) - 0.1 * r


def tf5(X):
    i = np.arange(1, X.shape[1] + 1)
    return -np.sum(np.sin(X) * np.sin(i * X**2 / np.pi) ** 20, axis=1)


@dataclass(frozen=True)
class TargetFunction:
    name: str
    func: object
    n_inputs: int
    low: float
    high: float
    normalize: bool
    train_noise: float
    n_train: int
    n_test: int


TARGET_FUNCTIONS = {
    "TF1": TargetFunction("TF1", tf1, 2, 0.0, 1.0, False, 0.0, 5000, 10000),
    "TF2": TargetFunction("TF2", tf2, 2, 0.0, 1.0, False, 0.2, 5000, 10000),
    "TF3": TargetFunction("TF3", tf3, 2, -500.0, 500.0, True, 0.0, 5000, 10000),
    "TF4": TargetFunction("TF4", tf4, 10, -4.0, 4.0, True, 0.0, 3750, 1250),
    "TF5": TargetFunction("TF5", tf5, 2, 0.0, math.pi, True, 0.0, 5000, 10000),
    "TF5-5": TargetFunction("TF5-5", tf5, 5, 0.0, math.pi, True, 0.0, 7500, 2500),
}


def get_target_function(name):
    key = str(name).upper().replace("_", "-")
    if key not in TARGET_FUNCTIONS:
        raise InvalidInput(f"unknown target function {name!r}; choose from {sorted(TARGET_FUNCTIONS)}")
    return TARGET_FUNCTIONS[key]


def gen_tf(name, n_train=None, n_test=None, seed=0):
    """Generate (train, test) datasets for one of the synthetic target functions.

    Inputs are uniform over the function's native box. For TF3, TF4 and TF5
    inputs and targets are min-max scaled with statistics of the training
    split (so test values may fall slightly outside [0, 1]). TF2 training
    targets get additive U(-0.2, 0.2) noise; its test targets stay clean.
    """
    tf = get_target_function(name)
    n_train = tf.n_train if n_train is None else int(n_train)
    n_test = tf.n_test if n_test is None else int(n_test)
    if n_train < 1 or n_test < 1:
        raise InvalidInput("sample counts must be >= 1")
    s_train, s_test, s_noise = np.random.SeedSequence(seed).spawn(3)
    X_train = np.random.default_rng(s_train).uniform(tf.low, tf.high, (n_train, tf.n_inputs))
    X_test = np.random.default_rng(s_test).uniform(tf.low, tf.high, (n_test, tf.n_inputs))
    y_train = tf.func(X_train)
    y_test = tf.func(X_test)
    if tf.train_noise:
        y_train = y_train + np.random.default_rng(s_noise).uniform(-tf.train_noise, tf.train_noise, n_train)
    names = [f"x{i + 1}" for i in range(tf.n_inputs)]
    train = Dataset(X_train, y_train, names, f"{tf.name}:train:seed={seed}")
    test = Dataset(X_test, y_test, names, f"{tf.name}:test:seed={seed}")
    if tf.normalize:
        stats = fit_normalization(train)
        train, test = apply_normalization(train, stats), apply_normalization(test, stats)
    return train, test
