"""Ingestion and label encoding of categorical tabular data."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)

OTHERS = "others"


class DatasetError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class ClassPrior:
    priors: dict[str, float]

    def __getitem__(self, cls: str) -> float:
        return self.priors[cls]


@dataclass(frozen=True, eq=False)
class EncodedDataset:
    """Label-encoded ``N x p`` categorical matrix with class labels.

    ``rows[i, j]`` is the code of row ``i`` on feature ``j``; codes are dense
    per feature. ``class_index`` maps each class to the sorted row indices
    carrying that label. Instances are treated as immutable.
    """

    rows: np.ndarray
    labels: tuple[str, ...]
    class_index: dict[str, np.ndarray]
    cardinalities: tuple[int, ...]
    feature_names: tuple[str, ...]
    category_names: tuple[dict[int, str], ...]

    def __post_init__(self):
        self.rows.setflags(write=False)
        for idx in self.class_index.values():
            idx.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(self.class_index)

    def class_rows(self, cls: str) -> np.ndarray:
        """Code matrix restricted to rows of class ``cls``."""
        return self.rows[self._index(cls)]

    def _index(self, cls: str) -> np.ndarray:
        try:
            return self.class_index[cls]
        except KeyError:
            raise KeyError(f"unknown class {cls!r}; known: {list(self.class_index)}") from None

    def priors(self) -> ClassPrior:
        n = self.n_rows
        return ClassPrior({c: len(idx) / n for c, idx in self.class_index.items()})

    def code_of(self, feature: int | str, category: str) -> int:
        j = feature if isinstance(feature, int) else self.feature_names.index(feature)
        for code, name in self.category_names[j].items():
            if name == category:
                return code
        raise KeyError(f"category {category!r} not present in feature {self.feature_names[j]!r}")


def from_records(
    records: Sequence[Sequence[object]],
    labels: Sequence[object],
    feature_names: Sequence[str] | None = None,
    uncommon_threshold: int = 0,
) -> EncodedDataset:
    """Encode raw category values; codes follow first-appearance order.

    With ``uncommon_threshold > 0``, categories seen fewer times than the
    threshold collapse into one ``"others"`` code placed after all retained
    categories of that feature.
    """
    if len(records) == 0:
        raise DatasetError("no data rows")
    if len(records) != len(labels):
        raise DatasetError(f"{len(records)} rows but {len(labels)} labels")
    p = len(records[0])
    if feature_names is None:
        feature_names = [f"f{j}" for j in range(p)]
    if len(feature_names) != p:
        raise DatasetError(f"{len(feature_names)} feature names for {p} columns")
    for i, r in enumerate(records):
        if len(r) != p:
            raise DatasetError(f"row {i} has {len(r)} fields, expected {p}")

    n = len(records)
    codes = np.empty((n, p), dtype=np.int32)
    cards = []
    cat_names = []
    for j in range(p):
        column = [str(r[j]) for r in records]
        counts: dict[str, int] = {}
        for v in column:
            counts[v] = counts.get(v, 0) + 1
        mapping: dict[str, int] = {}
        merged = False
        for v in column:
            if v in mapping:
                continue
            if uncommon_threshold > 0 and counts[v] < uncommon_threshold:
                merged = True
                continue
            mapping[v] = len(mapping)
        names = {c: v for v, c in mapping.items()}
        if merged:
            other = len(mapping)
            names[other] = OTHERS
            codes[:, j] = [mapping.get(v, other) for v in column]
        else:
            codes[:, j] = [mapping[v] for v in column]
        cards.append(len(names))
        cat_names.append(names)

    label_strs = tuple(str(y) for y in labels)
    class_index: dict[str, list[int]] = {}
    for i, y in enumerate(label_strs):
        class_index.setdefault(y, []).append(i)
    return EncodedDataset(
        rows=codes,
        labels=label_strs,
        class_index={c: np.asarray(ix, dtype=np.int64) for c, ix in class_index.items()},
        cardinalities=tuple(cards),
        feature_names=tuple(feature_names),
        category_names=tuple(cat_names),
    )


def bin_numeric(values: Sequence[float], n_bins: int) -> tuple[np.ndarray, int]:
    """Equal-frequency quantile binning.

    Returns ``(codes, effective_bins)``. Equal values always share a bin;
    when ties or too few distinct values leave bins empty, codes are
    renumbered densely and ``effective_bins`` reports how many remain.
    """
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("no values to bin")
    distinct = np.unique(x)
    if distinct.size < n_bins:
        log.warning("only %d distinct values; using %d bins instead of %d",
                    distinct.size, distinct.size, n_bins)
        n_bins = distinct.size
    s = np.sort(x)
    cuts = s[(np.arange(1, n_bins) * x.size) // n_bins]
    raw = np.searchsorted(cuts, x, side="right")
    used, codes = np.unique(raw, return_inverse=True)
    if used.size < n_bins:
        log.warning("tied values collapsed %d requested bins into %d", n_bins, used.size)
    return codes.astype(np.int32), int(used.size)


def _bin_labels(values: Sequence[float], codes: np.ndarray, k: int) -> list[str]:
    x = np.asarray(values, dtype=float)
    names = []
    for b in range(k):
        sel = x[codes == b]
        names.append(f"[{sel.min():g},{sel.max():g}]")
    return [names[c] for c in codes]


def ingest_csv(
    path: str | Path,
    label_column: str,
    uncommon_threshold: int = 0,
    bin_numeric_cols: Mapping[str, int] | None = None,
) -> EncodedDataset:
    """Read a headed, comma-delimited UTF-8 CSV and label-encode it.

    Columns listed in ``bin_numeric_cols`` are parsed as reals and replaced
    by equal-frequency bins before encoding. Empty fields are kept as their
    own category.
    """
    path = Path(path)
    if uncommon_threshold < 0:
        raise DatasetError("uncommon_threshold must be non-negative")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        body = [r for r in reader if r]
    if label_column not in header:
        raise DatasetError(f"{path}: label column {label_column!r} not in header {header}")
    if not body:
        raise DatasetError(f"{path}: header but no data rows")
    width = len(header)
    for i, r in enumerate(body):
        if len(r) != width:
            raise DatasetError(f"{path}: row {i + 2} has {len(r)} fields, header has {width}")

    li = header.index(label_column)
    feature_cols = [j for j in range(width) if j != li]
    columns = {header[j]: [r[j] for r in body] for j in feature_cols}
    for name, n_bins in (bin_numeric_cols or {}).items():
        if name not in columns:
            raise DatasetError(f"{path}: cannot bin unknown column {name!r}")
        try:
            vals = [float(v) for v in columns[name]]
        except ValueError as exc:
            raise DatasetError(f"{path}: column {name!r} is not numeric ({exc})") from None
        codes, k = bin_numeric(vals, n_bins)
        columns[name] = _bin_labels(vals, codes, k)

    names = [header[j] for j in feature_cols]
    records = list(zip(*(columns[n] for n in names)))
    labels = [r[li] for r in body]
    return from_records(records, labels, names, uncommon_threshold)


def sample_row(ds: EncodedDataset, cls: str, rng: np.random.Generator) -> int:
    """Uniform draw (with replacement) of a row index from class ``cls``."""
    idx = ds._index(cls)
    return int(idx[rng.integers(len(idx))])


def save_encoded(ds: EncodedDataset, path: str | Path) -> None:
    """Write the encoded form (codes plus name tables) as JSON."""
    doc = {
        "feature_names": list(ds.feature_names),
        "category_names": [{str(k): v for k, v in m.items()} for m in ds.category_names],
        "labels": list(ds.labels),
        "rows": ds.rows.tolist(),
    }
    Path(path).write_text(json.dumps(doc))


def load_encoded(path: str | Path) -> EncodedDataset:
    doc = json.loads(Path(path).read_text())
    rows = np.asarray(doc["rows"], dtype=np.int32)
    cat_names = tuple({int(k): v for k, v in m.items()} for m in doc["category_names"])
    class_index: dict[str, list[int]] = {}
    for i, y in enumerate(doc["labels"]):
        class_index.setdefault(y, []).append(i)
    return EncodedDataset(
        rows=rows,
        labels=tuple(doc["labels"]),
        class_index={c: np.asarray(ix, dtype=np.int64) for c, ix in class_index.items()},
        cardinalities=tuple(len(m) for m in cat_names),
        feature_names=tuple(doc["feature_names"]),
        category_names=cat_names,
    )
