"""k-median solvers over the simple matching metric, representatives restricted
to dataset members.

Two routes: deterministic exhaustive enumeration of all k-subsets (optimal for
the member-restricted objective, hence a 2-approximation to the unrestricted
mode objective), and seeded swap-based local search for instances where
enumeration is not affordable. Both run matrix-backed or on-the-fly with
identical results. The audit functions empirically certify the two bounds the
approximation argument rests on.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import CategoricalDataset, random_dataset
from .kmodes import mode_cost
from .metric import (
    DEFAULT_MATRIX_BUDGET,
    MatrixBudgetError,
    distance_columns,
    pairwise_matrix,
)

EXHAUSTIVE_GATE = 2000  # records; enumeration beyond this needs force=True
_SCAN_BLOCK = 256  # rows accumulated between prune checks
_CHUNK = 512  # candidate columns evaluated per vectorized batch


class InstanceTooLargeError(RuntimeError):
    """Refusal to run an enumeration whose cost the caller did not acknowledge."""


@dataclass(frozen=True)
class LocalSearchConfig:
    p: int = 1
    seed: int = 0
    min_relative_improvement: float = 1e-9
    max_steps: int = 1000
    restarts: int = 1

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("swap width p must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.min_relative_improvement < 0:
            raise ValueError("min_relative_improvement must be >= 0")


@dataclass
class MedoidSolution:
    medoid_indices: tuple[int, ...]
    assignment: np.ndarray
    medoid_objective: int
    algorithm: str  # "exhaustive" | "local-search"
    guarantee: float  # mode-objective approximation factor annotation
    elapsed: float


def _resolve_matrix(dataset: CategoricalDataset, matrix):
    if isinstance(matrix, str):
        if matrix != "auto":
            raise ValueError(f"unknown matrix mode {matrix!r}")
        try:
            return pairwise_matrix(dataset, max_bytes=DEFAULT_MATRIX_BUDGET)
        except MatrixBudgetError:
            return None
    return matrix


def _columns(values: np.ndarray, matrix, indices) -> np.ndarray:
    if matrix is not None:
        return matrix[:, list(indices)]
    return distance_columns(values, list(indices))


def cost_of_medoid_set(
    dataset: CategoricalDataset, indices, matrix=None
) -> tuple[int, np.ndarray]:
    """Weighted nearest-medoid objective and assignment for a fixed medoid set.

    Assignment ties go to the lowest position within the medoid list.
    """
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate medoid indices in {idx}")
    if any(i < 0 or i >= dataset.n_records for i in idx):
        raise ValueError(f"medoid index out of range in {idx}")
    cols = _columns(dataset.values, matrix, idx)
    assignment = np.argmin(cols, axis=1)  # first minimum = lowest position
    nearest = cols[np.arange(cols.shape[0]), assignment].astype(np.int64)
    objective = int((dataset.weights * nearest).sum())
    return objective, assignment


def _scan_subsets(values, weights, matrix, k, first_lo, first_hi, block=_SCAN_BLOCK):
    """Pruned lexicographic scan of k-subsets whose smallest index lies in
    [first_lo, first_hi). The partial weighted cost is accumulated block-wise
    and the candidate is abandoned as soon as it reaches the incumbent."""
    n = values.shape[0] if matrix is None else matrix.shape[0]
    best_cost = None
    best_subset = None
    for first in range(first_lo, first_hi):
        for rest in itertools.combinations(range(first + 1, n), k - 1):
            subset = [first, *rest]
            cols = _columns(values, matrix, subset)
            cost = 0
            aborted = False
            for s in range(0, n, block):
                e = min(s + block, n)
                part = cols[s:e].min(axis=1).astype(np.int64)
                cost += int(weights[s:e] @ part)
                if best_cost is not None and cost >= best_cost:
                    aborted = True
                    break
            if not aborted and (best_cost is None or cost < best_cost):
                best_cost = cost
                best_subset = tuple(subset)
    return best_cost, best_subset


def _scan_subsets_job(args):
    return _scan_subsets(*args)


def _balanced_first_ranges(n: int, k: int, parts: int) -> list[tuple[int, int]]:
    """Split first-index values into contiguous ranges of roughly equal subset counts."""
    firsts = list(range(0, n - k + 1))
    loads = [math.comb(n - f - 1, k - 1) for f in firsts]
    total = sum(loads)
    target = total / parts
    ranges = []
    lo, acc = 0, 0
    for f, load in zip(firsts, loads):
        acc += load
        if acc >= target and len(ranges) < parts - 1:
            ranges.append((lo, f + 1))
            lo, acc = f + 1, 0
    ranges.append((lo, n - k + 1))
    return [r for r in ranges if r[0] < r[1]]


def exhaustive_search(
    dataset: CategoricalDataset,
    k: int,
    matrix="auto",
    workers: int = 1,
    force: bool = False,
    gate_threshold: int = EXHAUSTIVE_GATE,
) -> MedoidSolution:
    """Optimal medoid k-subset by pruned enumeration, ties broken by the
    lexicographically smallest index tuple.

    The result is optimal for the member-restricted objective, which bounds
    the unrestricted mode objective within a factor of 2. Enumeration cost is
    O(k * n^(k+1)); instances beyond ``gate_threshold`` records are refused
    unless ``force`` is set. Output is independent of ``workers``.
    """
    t0 = time.perf_counter()
    n = dataset.n_records
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    if n > gate_threshold and not force:
        raise InstanceTooLargeError(
            f"exhaustive enumeration over {n} records exceeds the gate of "
            f"{gate_threshold}; pass force=True (CLI: --force) to run anyway"
        )
    matrix = _resolve_matrix(dataset, matrix)
    values, weights = dataset.values, dataset.weights

    if workers <= 1:
        results = [_scan_subsets(values, weights, matrix, k, 0, n - k + 1)]
    else:
        ranges = _balanced_first_ranges(n, k, workers)
        jobs = [(values, weights, matrix, k, lo, hi) for lo, hi in ranges]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_scan_subsets_job, jobs))

    best_cost, best_subset = min(
        (r for r in results if r[1] is not None), key=lambda r: (r[0], r[1])
    )
    objective, assignment = cost_of_medoid_set(dataset, best_subset, matrix)
    assert objective == best_cost, "pruned scan disagrees with recomputed objective"
    return MedoidSolution(
        medoid_indices=best_subset,
        assignment=assignment,
        medoid_objective=objective,
        algorithm="exhaustive",
        guarantee=2.0,
        elapsed=time.perf_counter() - t0,
    )


def exhaustive_search_naive(dataset: CategoricalDataset, k: int, matrix=None) -> MedoidSolution:
    """Pruning-free enumeration oracle: full cost for every k-subset, same tie
    rule as :func:`exhaustive_search`. Kept deliberately independent of the
    pruned scan path."""
    t0 = time.perf_counter()
    n = dataset.n_records
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    best: tuple[int, tuple[int, ...]] | None = None
    for subset in itertools.combinations(range(n), k):
        objective, _ = cost_of_medoid_set(dataset, subset, matrix)
        if best is None or objective < best[0]:
            best = (objective, subset)
    objective, assignment = cost_of_medoid_set(dataset, best[1], matrix)
    return MedoidSolution(
        medoid_indices=best[1],
        assignment=assignment,
        medoid_objective=objective,
        algorithm="exhaustive",
        guarantee=2.0,
        elapsed=time.perf_counter() - t0,
    )


def _weighted_column_sums(weights: np.ndarray, mins: np.ndarray) -> np.ndarray:
    return weights @ mins.astype(np.int64)


def _best_completion(values, weights, matrix, base, candidates, chunk=_CHUNK):
    """Minimal cost over single added columns: min_c sum_i w_i * min(base_i, d(i, c)).

    Returns (cost, candidate, position_in_candidates); ties resolved to the
    earliest candidate. ``base`` may be None when no column is kept.
    """
    best_cost, best_cand = None, None
    for s in range(0, len(candidates), chunk):
        block = candidates[s : s + chunk]
        cols = _columns(values, matrix, block)
        if base is not None:
            cols = np.minimum(base[:, None], cols)
        sums = _weighted_column_sums(weights, cols)
        j = int(np.argmin(sums))
        if best_cost is None or int(sums[j]) < best_cost:
            best_cost = int(sums[j])
            best_cand = int(block[j])
    return best_cost, best_cand


def local_search(
    dataset: CategoricalDataset,
    k: int,
    config: LocalSearchConfig,
    matrix="auto",
) -> MedoidSolution:
    """Swap-based local search: from a seeded random k-subset, repeatedly apply
    the best improving exchange of up to p medoids for equally many
    non-medoids, accepting only relative improvements of at least
    ``min_relative_improvement``; best of ``restarts`` restarts wins.

    The returned solution is swap-stable at the threshold. The p-swap
    neighborhood carries the known (3 + 2/p) factor for metric k-median,
    annotated here as 2 * (3 + 2/p) on the mode objective.
    """
    t0 = time.perf_counter()
    n = dataset.n_records
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    matrix = _resolve_matrix(dataset, matrix)
    values, weights = dataset.values, dataset.weights
    rng = np.random.default_rng(config.seed)
    starts = [np.sort(rng.choice(n, size=k, replace=False)) for _ in range(config.restarts)]

    best_overall: tuple[int, tuple[int, ...]] | None = None
    for start in starts:
        medoids = [int(i) for i in start]
        cols = _columns(values, matrix, medoids)
        cost = int(_weighted_column_sums(weights, cols.min(axis=1)[:, None])[0])
        for _ in range(config.max_steps):
            swap = _best_swap(values, weights, matrix, medoids, config.p)
            if swap is None:
                break
            new_cost, removals, additions = swap
            if not (new_cost < cost and cost - new_cost >= config.min_relative_improvement * cost):
                break
            kept = [m for pos, m in enumerate(medoids) if pos not in removals]
            medoids = sorted(kept + list(additions))
            cost = new_cost
        candidate = (cost, tuple(medoids))
        if best_overall is None or candidate[0] < best_overall[0]:
            best_overall = candidate

    objective, assignment = cost_of_medoid_set(dataset, best_overall[1], matrix)
    assert objective == best_overall[0], "swap bookkeeping disagrees with recomputed objective"
    return MedoidSolution(
        medoid_indices=best_overall[1],
        assignment=assignment,
        medoid_objective=objective,
        algorithm="local-search",
        guarantee=2.0 * (3.0 + 2.0 / config.p),
        elapsed=time.perf_counter() - t0,
    )


def _best_swap(values, weights, matrix, medoids, p):
    """Best (cost, removal positions, added indices) over swap sizes 1..p;
    None when k or the non-medoid pool admits no exchange. Deterministic:
    sizes ascending, removal positions and additions in lexicographic order,
    strict improvement to move the incumbent."""
    n = values.shape[0] if matrix is None else matrix.shape[0]
    k = len(medoids)
    in_medoids = np.zeros(n, dtype=bool)
    in_medoids[medoids] = True
    pool = np.flatnonzero(~in_medoids)
    best = None
    for s in range(1, min(p, k, len(pool)) + 1):
        for removals in itertools.combinations(range(k), s):
            kept = [m for pos, m in enumerate(medoids) if pos not in removals]
            base = None
            if kept:
                base = _columns(values, matrix, kept).min(axis=1).astype(np.int64)
            for prefix in itertools.combinations(range(len(pool)), s - 1):
                prefix_idx = [int(pool[i]) for i in prefix]
                if prefix_idx:
                    pcols = _columns(values, matrix, prefix_idx).min(axis=1).astype(np.int64)
                    pbase = pcols if base is None else np.minimum(base, pcols)
                else:
                    pbase = base
                tail_start = (prefix[-1] + 1) if prefix else 0
                tail = pool[tail_start:]
                if len(tail) == 0:
                    continue
                cost, cand = _best_completion(values, weights, matrix, pbase, tail)
                if cost is not None and (best is None or cost < best[0]):
                    best = (cost, removals, tuple(prefix_idx + [cand]))
    return best


@dataclass(frozen=True)
class Lemma1Report:
    """Best-medoid vs mode cost ratios over sampled subsets; the bound is 2."""

    trials: int
    max_ratio: float
    histogram: tuple[tuple[float, float, int], ...]
    violations: tuple[tuple[tuple[int, ...], int, int], ...]  # (subset, medoid cost, mode cost)

    @property
    def passed(self) -> bool:
        return not self.violations


def audit_lemma1(
    dataset: CategoricalDataset, trials: int, seed: int, matrix="auto"
) -> Lemma1Report:
    """Sample random non-empty record subsets; check that the best member
    representative costs at most twice the mode on every one. The 0/0 case
    (singleton or all-identical subsets) counts as ratio 1."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    matrix = _resolve_matrix(dataset, matrix)
    rng = np.random.default_rng(seed)
    n = dataset.n_records
    values, weights = dataset.values, dataset.weights
    sizes = dataset.schema.domain_sizes()

    ratios = np.empty(trials, dtype=np.float64)
    violations = []
    for t in range(trials):
        s = int(rng.integers(1, n + 1))
        idx = np.sort(rng.choice(n, size=s, replace=False))
        w = weights[idx]
        if matrix is not None:
            sub = matrix[np.ix_(idx, idx)].astype(np.int64)
            col_sums = w @ sub
        else:
            vs = values[idx]
            col_sums = np.zeros(s, dtype=np.int64)
            block = max(1, (1 << 22) // max(1, s * dataset.m))
            for b in range(0, s, block):
                e = min(b + block, s)
                d = (vs[b:e, None, :] != vs[None, :, :]).sum(axis=2)
                col_sums += w[b:e] @ d
        medoid_cost = int(col_sums.min())
        m_cost = mode_cost(values[idx], w, sizes)
        ratios[t] = 1.0 if m_cost == 0 else medoid_cost / m_cost
        if medoid_cost > 2 * m_cost:
            violations.append((tuple(int(i) for i in idx), medoid_cost, m_cost))

    counts, edges = np.histogram(ratios, bins=20, range=(0.0, 2.0))
    histogram = tuple(
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(len(counts))
    )
    return Lemma1Report(
        trials=trials,
        max_ratio=float(ratios.max()),
        histogram=histogram,
        violations=tuple(violations),
    )


def brute_force_kmodes_objective(dataset: CategoricalDataset, k: int, cap: int = 5_000_000) -> int:
    """Optimal mode objective by enumerating every assignment of records to k
    clusters and fitting modes per cluster. Exponential; guarded by ``cap`` on
    k**n * n."""
    n, m = dataset.n_records, dataset.m
    if k ** n * n > cap:
        raise InstanceTooLargeError(
            f"partition oracle over k^n = {k}^{n} assignments is too large"
        )
    rows = [tuple(int(v) for v in row) for row in dataset.values]
    weights = [int(w) for w in dataset.weights]
    sizes = [int(s) for s in dataset.schema.domain_sizes()]
    best = None
    for labeling in itertools.product(range(k), repeat=n):
        cost = 0
        for c in range(k):
            members = [i for i in range(n) if labeling[i] == c]
            if not members:
                continue
            total = sum(weights[i] for i in members)
            for r in range(m):
                counts = [0] * sizes[r]
                for i in members:
                    counts[rows[i][r]] += weights[i]
                cost += total - max(counts)
            if best is not None and cost >= best:
                break
        if best is None or cost < best:
            best = cost
    return best


@dataclass(frozen=True)
class Lemma2Report:
    """Medoid optimum vs partition-brute-force mode optimum on random instances."""

    trials: int
    max_ratio: float
    violations: tuple[tuple[int, int, int], ...]  # (instance seed, medoid opt, mode opt)

    @property
    def passed(self) -> bool:
        return not self.violations


def audit_lemma2(
    trials: int,
    seed: int,
    n_max: int = 10,
    m_max: int = 4,
    max_categories: int = 3,
    k: int = 2,
) -> Lemma2Report:
    """On seeded random instances, certify that the optimal member-restricted
    objective is at most twice the optimal mode objective."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    max_ratio = 0.0
    violations = []
    for _ in range(trials):
        n = int(rng.integers(k, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        inst_seed = int(rng.integers(0, 2**63 - 1))
        inst = random_dataset(n=n, m=m, max_categories=max_categories, seed=inst_seed)
        medoid_opt = exhaustive_search_naive(inst, k).medoid_objective
        mode_opt = brute_force_kmodes_objective(inst, k)
        ratio = 1.0 if mode_opt == 0 else medoid_opt / mode_opt
        max_ratio = max(max_ratio, ratio)
        if medoid_opt > 2 * mode_opt:
            violations.append((inst_seed, medoid_opt, mode_opt))
    return Lemma2Report(trials=trials, max_ratio=max_ratio, violations=tuple(violations))
