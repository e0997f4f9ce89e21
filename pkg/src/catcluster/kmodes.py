"""Lloyd-style k-modes heuristic.

Alternates nearest-representative assignment with per-cluster frequency-based
mode updates until the assignment stops changing. Both half-steps are exact
minimizers of the integer objective given the other half fixed, so the
objective is non-increasing except across empty-cluster reseeds; the run is
deterministic for a given dataset and config.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import CategoricalDataset, DatasetError

INIT_METHODS = ("first-k-distinct", "random")
EMPTY_POLICIES = ("reseed-farthest",)

_ASSIGN_CHUNK = 1 << 22  # elements in the (rows x k x m) comparison temporary


@dataclass(frozen=True)
class KModesConfig:
    k: int
    init: str = "first-k-distinct"
    seed: int = 0
    max_iterations: int = 100
    empty_cluster_policy: str = "reseed-farthest"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.init not in INIT_METHODS:
            raise ValueError(f"unknown init {self.init!r}; choose from {INIT_METHODS}")
        if self.empty_cluster_policy not in EMPTY_POLICIES:
            raise ValueError(f"unknown empty_cluster_policy {self.empty_cluster_policy!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class KModesResult:
    assignment: np.ndarray
    modes: np.ndarray
    mode_objective: int
    iterations: int
    converged: bool
    # populated in debug mode: objective after each iteration, and which
    # iterations had an empty-cluster reseed (monotonicity holds between
    # consecutive non-reseed iterations)
    objective_history: tuple[int, ...] | None = None
    reseeded_iterations: tuple[int, ...] = field(default_factory=tuple)


def compute_mode(dataset: CategoricalDataset, indices=None) -> np.ndarray:
    """Mode vector of a weighted record subset: per attribute, a category of
    maximal weighted frequency, ties broken by smallest category id."""
    if indices is None:
        values, weights = dataset.values, dataset.weights
    else:
        idx = np.asarray(indices, dtype=np.int64)
        values, weights = dataset.values[idx], dataset.weights[idx]
    if values.shape[0] == 0:
        raise DatasetError("cannot take the mode of an empty cluster")
    return _mode_of(values, weights, dataset.schema.domain_sizes())


def _mode_of(values: np.ndarray, weights: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    mode = np.empty(values.shape[1], dtype=np.int32)
    for r in range(values.shape[1]):
        counts = np.bincount(values[:, r], weights=weights, minlength=int(sizes[r]))
        mode[r] = int(np.argmax(counts))  # first maximum = smallest id
    return mode


def mode_cost(values: np.ndarray, weights: np.ndarray, sizes: np.ndarray) -> int:
    """Summed weighted distance of a record set to its own mode.

    Equals, per attribute, total weight minus the heaviest category's weight.
    """
    total = int(weights.sum())
    cost = 0
    for r in range(values.shape[1]):
        counts = np.bincount(values[:, r], weights=weights, minlength=int(sizes[r]))
        cost += total - int(counts.max())
    return cost


def distinct_row_indices(values: np.ndarray) -> list[int]:
    """Indices of the first occurrence of each distinct value vector, in file order."""
    seen: set[bytes] = set()
    out: list[int] = []
    for i in range(values.shape[0]):
        key = values[i].tobytes()
        if key not in seen:
            seen.add(key)
            out.append(i)
    return out


def init_modes(dataset: CategoricalDataset, config: KModesConfig) -> np.ndarray:
    """Initial k mode vectors: the first k pairwise-distinct records in file
    order, or a seeded uniform draw of k distinct value vectors."""
    distinct = distinct_row_indices(dataset.values)
    if config.k > len(distinct):
        raise DatasetError(
            f"k={config.k} exceeds the {len(distinct)} distinct value vectors in the dataset"
        )
    if config.init == "first-k-distinct":
        chosen = distinct[: config.k]
    else:
        rng = np.random.default_rng(config.seed)
        picks = rng.choice(len(distinct), size=config.k, replace=False)
        chosen = [distinct[int(p)] for p in picks]
    return dataset.values[chosen].astype(np.int32)


def assign_points(values_or_dataset, modes: np.ndarray) -> np.ndarray:
    """Nearest-mode index per record, ties broken by lowest cluster index."""
    values = getattr(values_or_dataset, "values", values_or_dataset)
    if modes.shape[0] == 0:
        raise ValueError("modes must be non-empty")
    n, m = values.shape
    k = modes.shape[0]
    out = np.empty(n, dtype=np.int64)
    block = max(1, _ASSIGN_CHUNK // max(1, k * m))
    for s in range(0, n, block):
        e = min(s + block, n)
        dists = (values[s:e, None, :] != modes[None, :, :]).sum(axis=2)
        out[s:e] = np.argmin(dists, axis=1)  # first minimum = lowest cluster index
    return out


def _objective(values, weights, modes, assignment) -> int:
    return int(((values != modes[assignment]).sum(axis=1) * weights).sum())


def _reseed_empty_clusters(values, assignment, modes, k) -> tuple[np.ndarray, np.ndarray, bool]:
    """Reseed each empty cluster's mode with the record farthest from its
    current representative (ties by lowest record index), skipping records
    whose vector already serves as another cluster's mode, then reassign."""
    reseeded = False
    for _ in range(k + 1):
        counts = np.bincount(assignment, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return assignment, modes, reseeded
        reseeded = True
        modes = modes.copy()
        for c in empty:
            d = (values != modes[c]).sum(axis=1).astype(np.int64)
            others = np.array([i for i in range(k) if i != c], dtype=np.int64)
            if others.size:
                taken = (values[:, None, :] == modes[others][None, :, :]).all(axis=2).any(axis=1)
                d[taken] = -1
            pick = int(np.argmax(d))  # first maximum = lowest record index
            if d[pick] < 0:
                raise RuntimeError("no reseed candidate for empty cluster")
            modes[c] = values[pick]
        assignment = assign_points(values, modes)
    raise RuntimeError("empty-cluster reseeding did not stabilize")


def run_kmodes(dataset: CategoricalDataset, config: KModesConfig, debug: bool = False) -> KModesResult:
    """Run the alternating heuristic until the assignment repeats or
    ``max_iterations`` is hit. In debug mode the per-iteration objective is
    recorded and checked non-increasing outside reseed iterations."""
    values, weights = dataset.values, dataset.weights
    sizes = dataset.schema.domain_sizes()
    k = config.k

    modes = init_modes(dataset, config)
    assignment = assign_points(values, modes)
    assignment, modes, reseeded = _reseed_empty_clusters(values, assignment, modes, k)

    history: list[int] = []
    reseeded_iters: list[int] = [0] if reseeded else []
    converged = False
    iterations = 0
    for it in range(1, config.max_iterations + 1):
        iterations = it
        modes = np.stack(
            [_mode_of(values[assignment == c], weights[assignment == c], sizes) for c in range(k)]
        )
        new_assignment = assign_points(values, modes)
        new_assignment, modes, reseeded = _reseed_empty_clusters(values, new_assignment, modes, k)
        if reseeded:
            reseeded_iters.append(it)
        if debug:
            obj = _objective(values, weights, modes, new_assignment)
            if history and it not in reseeded_iters:
                assert obj <= history[-1], (
                    f"objective increased {history[-1]} -> {obj} at iteration {it}"
                )
            history.append(obj)
        if np.array_equal(new_assignment, assignment) and not reseeded:
            converged = True
            break
        assignment = new_assignment

    return KModesResult(
        assignment=assignment,
        modes=modes,
        mode_objective=_objective(values, weights, modes, assignment),
        iterations=iterations,
        converged=converged,
        objective_history=tuple(history) if debug else None,
        reseeded_iterations=tuple(reseeded_iters),
    )
