"""Clustering quality measurement: confusion matrix against true labels,
accuracy/error in exact rational arithmetic, and the two objective readings
(mode-based and member-restricted) for any partition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dataset import CategoricalDataset
from .kmodes import mode_cost


def format_rounded(x, places: int = 3) -> str:
    """Decimal string rounded half-up, e.g. 59/435 -> '0.136'.

    Exact for Fraction input; floats are converted exactly first.
    """
    frac = x if isinstance(x, Fraction) else Fraction(x)
    if frac < 0:
        raise ValueError("negative values are not expected here")
    scale = 10 ** places
    units = math.floor(frac * scale + Fraction(1, 2))
    return f"{units // scale}.{units % scale:0{places}d}"


@dataclass(frozen=True)
class ConfusionMatrix:
    """Weighted cluster-by-class contingency table."""

    counts: np.ndarray  # (k, L) int64
    label_names: tuple[str, ...]

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def row_max_total(self) -> int:
        """Sum over clusters of the dominant class's weight."""
        if self.counts.size == 0:
            return 0
        return int(self.counts.max(axis=1).sum())

    def to_lists(self) -> list[list[int]]:
        return [[int(c) for c in row] for row in self.counts]

    def to_text(self, indent: str = "") -> str:
        header = ["cluster", *self.label_names]
        rows = [[str(i), *(str(int(c)) for c in row)] for i, row in enumerate(self.counts)]
        widths = [max(len(r[c]) for r in [header, *rows]) for c in range(len(header))]
        lines = [
            indent + "  ".join(cell.rjust(w) for cell, w in zip(r, widths))
            for r in [header, *rows]
        ]
        return "\n".join(lines)


def confusion(dataset: CategoricalDataset, assignment, k: int | None = None) -> ConfusionMatrix:
    """counts[i][j] = total weight of records in cluster i carrying class j."""
    if dataset.labels is None:
        raise ValueError("confusion matrix needs a labeled dataset")
    assignment = np.asarray(assignment, dtype=np.int64)
    if assignment.shape != (dataset.n_records,):
        raise ValueError(
            f"assignment shape {assignment.shape} does not cover {dataset.n_records} records"
        )
    if k is None:
        k = int(assignment.max()) + 1
    label_names = tuple(dataset.schema.label_domain.categories)
    counts = np.zeros((k, len(label_names)), dtype=np.int64)
    np.add.at(counts, (assignment, dataset.labels), dataset.weights)
    assert int(counts.sum()) == dataset.total_weight
    return ConfusionMatrix(counts=counts, label_names=label_names)


def accuracy_error(matrix: ConfusionMatrix) -> tuple[Fraction, Fraction]:
    """Accuracy r = (sum of per-cluster dominant-class weights) / n and error
    e = 1 - r, both as exact rationals."""
    total = matrix.total
    if total <= 0:
        raise ValueError("empty confusion matrix")
    r = Fraction(matrix.row_max_total(), total)
    return r, 1 - r


def _cluster_indices(assignment: np.ndarray, k: int | None) -> list[np.ndarray]:
    assignment = np.asarray(assignment, dtype=np.int64)
    if k is None:
        k = int(assignment.max()) + 1
    groups = [np.flatnonzero(assignment == c) for c in range(k)]
    for c, idx in enumerate(groups):
        if idx.size == 0:
            raise ValueError(f"cluster {c} is empty")
    return groups


def objective_under_modes(dataset: CategoricalDataset, assignment, k: int | None = None) -> int:
    """Refit a mode on each cluster of the partition and sum the weighted
    distances; minimal over all per-cluster representative vectors."""
    sizes = dataset.schema.domain_sizes()
    total = 0
    for idx in _cluster_indices(assignment, k):
        total += mode_cost(dataset.values[idx], dataset.weights[idx], sizes)
    return total


def _best_member_cost(values: np.ndarray, weights: np.ndarray) -> int:
    """Min over members c of sum_i w_i * d(i, c), block-wise to bound memory."""
    s, m = values.shape
    col_sums = np.zeros(s, dtype=np.int64)
    block = max(1, (1 << 22) // max(1, s * m))
    for b in range(0, s, block):
        e = min(b + block, s)
        d = (values[b:e, None, :] != values[None, :, :]).sum(axis=2)
        col_sums += weights[b:e] @ d
    return int(col_sums.min())


def objective_under_medoids(
    dataset: CategoricalDataset,
    assignment=None,
    medoid_indices=None,
    k: int | None = None,
) -> int:
    """Member-restricted objective: for a partition, each cluster's best member
    representative; for a medoid set, the nearest-medoid sum."""
    if (assignment is None) == (medoid_indices is None):
        raise ValueError("pass exactly one of assignment or medoid_indices")
    if medoid_indices is not None:
        from .medoids import cost_of_medoid_set

        objective, _ = cost_of_medoid_set(dataset, medoid_indices)
        return objective
    total = 0
    for idx in _cluster_indices(assignment, k):
        total += _best_member_cost(dataset.values[idx], dataset.weights[idx])
    return total


@dataclass(frozen=True)
class EvalReport:
    accuracy: Fraction
    error: Fraction
    mode_objective: int
    medoid_objective: int | None
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "accuracy": {
                "exact": f"{self.accuracy.numerator}/{self.accuracy.denominator}",
                "display": format_rounded(self.accuracy),
            },
            "error": {
                "exact": f"{self.error.numerator}/{self.error.denominator}",
                "display": format_rounded(self.error),
            },
            "mode_objective": self.mode_objective,
            "medoid_objective": self.medoid_objective,
            "confusion": {
                "labels": list(self.confusion.label_names),
                "counts": self.confusion.to_lists(),
            },
        }

    def to_text(self) -> str:
        rows = [
            ("accuracy", f"{format_rounded(self.accuracy)} ({self.accuracy})"),
            ("error", f"{format_rounded(self.error)} ({self.error})"),
            ("mode objective", str(self.mode_objective)),
        ]
        if self.medoid_objective is not None:
            rows.append(("medoid objective", str(self.medoid_objective)))
        width = max(len(name) for name, _ in rows)
        lines = [f"{name.ljust(width)}  {value}" for name, value in rows]
        lines.append("confusion matrix:")
        lines.append(self.confusion.to_text(indent="  "))
        return "\n".join(lines)


def evaluate(
    dataset: CategoricalDataset,
    assignment,
    medoid_objective: int | None = None,
    k: int | None = None,
) -> EvalReport:
    """Full quality report for a labeled dataset and a partition. For medoid
    solutions pass the solver's objective so both readings are reported."""
    matrix = confusion(dataset, assignment, k=k)
    r, e = accuracy_error(matrix)
    return EvalReport(
        accuracy=r,
        error=e,
        mode_objective=objective_under_modes(dataset, assignment, k=k),
        medoid_objective=medoid_objective,
        confusion=matrix,
    )
