"""Datasets, quadratic feature expansion, spurious predictors and standardization."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ColumnError, VarselError, ZeroVarianceError

KINDS = ("base", "interaction", "square", "spurious")


@dataclass(frozen=True)
class ColumnMeta:
    """Metadata for one predictor column.

    ``parents`` names the base columns a derived column was built from:
    two for an interaction, one for a square, none otherwise.
    """

    name: str
    kind: str = "base"
    is_binary: bool = False
    parents: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ColumnError(f"unknown column kind {self.kind!r}", self.name)
        if self.kind == "interaction":
            if len(self.parents) != 2 or self.parents[0] == self.parents[1]:
                raise ColumnError("interaction needs two distinct parents", self.name)
        elif self.kind == "square":
            if len(self.parents) != 1:
                raise ColumnError("square needs exactly one parent", self.name)
        elif self.parents:
            raise ColumnError(f"{self.kind} column cannot have parents", self.name)


@dataclass(frozen=True)
class Dataset:
    """Response vector ``y`` (length n) and predictor matrix ``X`` (n x m)."""

    y: np.ndarray
    X: np.ndarray
    columns: tuple[ColumnMeta, ...]

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if y.ndim != 1:
            raise VarselError("response must be a vector")
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise VarselError(
                f"predictor matrix has shape {X.shape}, expected ({y.shape[0]}, m)"
            )
        columns = tuple(self.columns)
        if len(columns) != X.shape[1]:
            raise VarselError(
                f"{len(columns)} column descriptions for {X.shape[1]} predictors"
            )
        _check_unique(c.name for c in columns)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "columns", columns)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def take(self, rows) -> "Dataset":
        """Return the dataset restricted to the given case indices."""
        rows = np.asarray(rows)
        return Dataset(self.y[rows], self.X[rows], self.columns)

    def select(self, cols) -> "Dataset":
        """Return the dataset restricted to the given column indices."""
        cols = [int(j) for j in cols]
        return Dataset(self.y, self.X[:, cols], tuple(self.columns[j] for j in cols))


@dataclass(frozen=True)
class StandardizedDataset:
    """A dataset with centered, unit-standard-deviation columns and centered response.

    ``centers``, ``scales`` and ``y_center`` are kept so the same transform
    can be applied verbatim to new cases (validation folds, predictions).
    Scales use the n - 1 divisor.
    """

    dataset: Dataset
    X: np.ndarray
    y: np.ndarray
    centers: np.ndarray
    scales: np.ndarray
    y_center: float
    columns: tuple[ColumnMeta, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]

    def transform(self, X) -> np.ndarray:
        """Standardize new predictor rows with the stored centers and scales."""
        X = np.asarray(X, dtype=float)
        return (X - self.centers) / self.scales

    def inverse_transform(self, Z) -> np.ndarray:
        return np.asarray(Z, dtype=float) * self.scales + self.centers

    def predict(self, active: Sequence[int], coefficients, X) -> np.ndarray:
        """Predict responses for raw rows ``X`` from standardized-scale coefficients."""
        Z = self.transform(X)
        active = list(active)
        if not active:
            return np.full(Z.shape[0], self.y_center)
        return self.y_center + Z[:, active] @ np.asarray(coefficients, dtype=float)

    def as_dataset(self) -> Dataset:
        """The standardized values wrapped as a plain dataset."""
        return Dataset(self.y, self.X, self.columns)


def _check_unique(names: Iterable[str]):
    seen = set()
    for name in names:
        if name in seen:
            raise ColumnError(f"duplicate column name {name!r}", name)
        seen.add(name)


def make_dataset(y, X, names=None, binary=()) -> Dataset:
    """Build a dataset of base columns from arrays.

    Parameters
    ----------
    y : array_like, shape (n,)
    X : array_like, shape (n, m)
    names : sequence of str, optional
        Column names; defaults to ``x0, x1, ...``.
    binary : iterable of str
        Names of columns flagged as binary.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if names is None:
        names = [f"x{j}" for j in range(X.shape[1])]
    binary = set(binary)
    unknown = binary - set(names)
    if unknown:
        name = sorted(unknown)[0]
        raise ColumnError(f"unknown binary column {name!r}", name)
    columns = tuple(ColumnMeta(str(nm), "base", nm in binary) for nm in names)
    return Dataset(np.asarray(y, dtype=float), X, columns)


def expand_quadratic(base: Dataset) -> Dataset:
    """Add all pairwise interactions and the squares of non-binary columns.

    Spurious columns are expanded like base columns. Output order is the
    base columns, then interactions in lexicographic order of parent
    position, then squares in base order, giving
    ``b + b*(b-1)/2 + (b - #binary)`` columns.
    """
    b = base.m
    if b < 1:
        raise ColumnError("quadratic expansion needs at least one column")
    for c in base.columns:
        if c.kind not in ("base", "spurious"):
            raise ColumnError(
                f"column {c.name!r} is already derived ({c.kind})", c.name
            )

    X = base.X
    blocks = [X]
    columns = list(base.columns)
    pairs = list(itertools.combinations(range(b), 2))
    if pairs:
        left, right = zip(*pairs)
        blocks.append(X[:, list(left)] * X[:, list(right)])
    for i, j in pairs:
        a, c = base.columns[i], base.columns[j]
        columns.append(ColumnMeta(f"{a.name}:{c.name}", "interaction", False, (a.name, c.name)))
    squared = [j for j, c in enumerate(base.columns) if not c.is_binary]
    if squared:
        blocks.append(X[:, squared] ** 2)
    for j in squared:
        c = base.columns[j]
        columns.append(ColumnMeta(f"{c.name}^2", "square", False, (c.name,)))
    return Dataset(base.y, np.hstack(blocks), tuple(columns))


def expanded_size(b: int, n_binary: int) -> int:
    """Column count produced by :func:`expand_quadratic` for ``b`` columns."""
    return b + b * (b - 1) // 2 + (b - n_binary)


def augment_spurious(base: Dataset, k: int, rng: np.random.Generator) -> Dataset:
    """Append ``k`` columns of i.i.d. standard normal noise."""
    if k < 0:
        raise VarselError("number of spurious columns must be nonnegative")
    if k == 0:
        return base
    taken = set(base.names)
    names = []
    i = 0
    while len(names) < k:
        name = f"noise{i}"
        if name not in taken:
            names.append(name)
        i += 1
    Z = rng.standard_normal((base.n, k))
    columns = base.columns + tuple(ColumnMeta(nm, "spurious", False) for nm in names)
    return Dataset(base.y, np.hstack([base.X, Z]), columns)


def column_scales(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    centers = X.mean(axis=0)
    scales = X.std(axis=0, ddof=1) if X.shape[0] > 1 else np.zeros(X.shape[1])
    return centers, scales


def zero_variance_columns(d: Dataset, tol: float = 1e-12) -> list[int]:
    """Indices of columns whose spread is negligible relative to their magnitude."""
    centers, scales = column_scales(d.X)
    size = np.maximum(np.abs(centers), 1.0)
    return [int(j) for j in np.flatnonzero(~(scales > tol * size))]


def standardize(d: Dataset) -> StandardizedDataset:
    """Center every column and scale it to unit standard deviation; center the response.

    Raises
    ------
    ZeroVarianceError
        If any column is constant; the error names the first such column.
    """
    constant = zero_variance_columns(d)
    if constant:
        raise ZeroVarianceError(d.columns[constant[0]].name)
    centers, scales = column_scales(d.X)
    y_center = float(d.y.mean())
    return StandardizedDataset(
        dataset=d,
        X=(d.X - centers) / scales,
        y=d.y - y_center,
        centers=centers,
        scales=scales,
        y_center=y_center,
        columns=d.columns,
    )


def read_csv(path, response: str, binary: Sequence[str] = ()) -> Dataset:
    """Read a comma-separated file with a header row into a base-column dataset.

    Every column other than ``response`` becomes a predictor.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise VarselError(f"{path}: empty file") from None
        rows = [row for row in reader if row]
    _check_unique(header)
    if response not in header:
        raise ColumnError(f"unknown response column {response!r}", response)
    for name in binary:
        if name not in header or name == response:
            raise ColumnError(f"unknown binary column {name!r}", name)
    try:
        values = np.array([[float(v) for v in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise VarselError(f"{path}: non-numeric value ({exc})") from None
    if values.size == 0:
        raise VarselError(f"{path}: no data rows")
    if values.ndim != 2 or values.shape[1] != len(header):
        raise VarselError(f"{path}: ragged rows")
    r = header.index(response)
    names = [h for h in header if h != response]
    X = np.delete(values, r, axis=1)
    return make_dataset(values[:, r], X, names, binary)


def write_csv(d: Dataset, path, response: str = "y"):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(d.names + [response])
        for xi, yi in zip(d.X, d.y):
            writer.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


def load_diabetes(scaled: bool = True) -> Dataset:
    """The 442-case diabetes data with ``sex`` flagged binary.

    With ``scaled`` the ten base columns come centered and scaled, the form
    from which the 64-column quadratic diabetes model is usually built;
    otherwise they are on their original units. The response is always in
    original units. Needs scikit-learn, which ships the data.
    """
    from sklearn.datasets import load_diabetes as _load

    raw = _load(scaled=scaled)
    return make_dataset(raw.target, raw.data, list(raw.feature_names), binary=["sex"])
