"""Simple matching dissimilarity: the number of attributes two records disagree on.

The measure is a true metric on category-id vectors (non-negative, zero only
for equal vectors, symmetric, triangle inequality), which
``check_metric_properties`` certifies empirically on seeded random triples.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import CategoricalDataset, Record

DEFAULT_MATRIX_BUDGET = 1 << 30  # bytes


class SchemaMismatchError(ValueError):
    """Distance requested between records of different schemas."""


class MatrixBudgetError(MemoryError):
    """Materializing the pairwise matrix would exceed the configured byte cap."""


def distance(x: Record, y: Record) -> int:
    """Count of mismatching attributes between two records of one schema."""
    if x.schema is not y.schema and x.schema != y.schema:
        raise SchemaMismatchError("records come from different schemas")
    return int(np.count_nonzero(x.values != y.values))


def distance_columns(values: np.ndarray, indices) -> np.ndarray:
    """Distances from every row of ``values`` to each row in ``indices``, shape (n, len(indices))."""
    idx = np.atleast_1d(np.asarray(indices, dtype=np.int64))
    out = np.empty((values.shape[0], idx.size), dtype=np.int64)
    for j, i in enumerate(idx):
        out[:, j] = (values != values[i]).sum(axis=1)
    return out


def matrix_dtype(m: int):
    """Smallest unsigned integer width that holds a distance in [0, m]."""
    if m <= np.iinfo(np.uint8).max:
        return np.uint8
    if m <= np.iinfo(np.uint16).max:
        return np.uint16
    return np.uint32


def pairwise_matrix(
    dataset: CategoricalDataset,
    max_bytes: int = DEFAULT_MATRIX_BUDGET,
    workers: int = 1,
) -> np.ndarray:
    """Full n x n distance matrix in the smallest integer width that holds m.

    Raises :class:`MatrixBudgetError` when the matrix would exceed ``max_bytes``;
    callers are expected to fall back to on-the-fly distances. Row blocks are
    independent, so the result is identical for any worker count.
    """
    values = dataset.values
    n, m = values.shape
    dtype = matrix_dtype(m)
    need = n * n * np.dtype(dtype).itemsize
    if need > max_bytes:
        raise MatrixBudgetError(
            f"{n}x{n} distance matrix needs {need} bytes, cap is {max_bytes}"
        )
    out = np.empty((n, n), dtype=dtype)
    # keep the (block x n x m) boolean temporary around ~32MB
    block = max(1, min(n, (32 << 20) // max(1, n * m)))
    ranges = [(s, min(s + block, n)) for s in range(0, n, block)]

    def fill(rng):
        s, e = rng
        np.sum(values[s:e, None, :] != values[None, :, :], axis=2, dtype=dtype, out=out[s:e])

    if workers <= 1 or len(ranges) == 1:
        for rng in ranges:
            fill(rng)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(fill, ranges))
    return out


@dataclass(frozen=True)
class MetricReport:
    """Outcome of the metric-axiom audit over sampled triples."""

    triples_checked: int
    violations: tuple[tuple[tuple[int, int, int], str], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_metric_properties(
    dataset: CategoricalDataset, sample_size: int, seed: int
) -> MetricReport:
    """Assert the four metric axioms on ``sample_size`` seeded random triples.

    Violations are returned as data, not raised; a non-empty list indicates an
    implementation bug, never a property of the input data.
    """
    if sample_size < 1:
        raise ValueError("sample_size must be >= 1")
    rng = np.random.default_rng(seed)
    v = dataset.values
    n = dataset.n_records
    i = rng.integers(0, n, size=sample_size)
    j = rng.integers(0, n, size=sample_size)
    k = rng.integers(0, n, size=sample_size)

    d_ij = (v[i] != v[j]).sum(axis=1)
    d_ji = (v[j] != v[i]).sum(axis=1)
    d_jk = (v[j] != v[k]).sum(axis=1)
    d_ik = (v[i] != v[k]).sum(axis=1)
    equal_ij = (v[i] == v[j]).all(axis=1)

    violations: list[tuple[tuple[int, int, int], str]] = []

    def record_violations(mask: np.ndarray, axiom: str):
        for t in np.flatnonzero(mask):
            violations.append(((int(i[t]), int(j[t]), int(k[t])), axiom))

    record_violations(d_ij < 0, "non-negativity")
    record_violations(equal_ij & (d_ij != 0), "identity: d(x,x) must be 0")
    record_violations(~equal_ij & (d_ij == 0), "positivity: d(x,y) must be > 0 for x != y")
    record_violations(d_ij != d_ji, "symmetry")
    record_violations(d_ij + d_jk < d_ik, "triangle inequality")

    return MetricReport(triples_checked=sample_size, violations=tuple(violations))
