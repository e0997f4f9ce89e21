"""Command-line front end: dataset fetching, clustering runs, reference-result
reproduction, and property verification.

JSON is the canonical output; tsv and text are projections of it. Output for a
given config is byte-identical across repeated runs and thread counts, so
wall-clock timings go to stderr and enter the JSON only behind --timings.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
import urllib.error
import urllib.request
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import (
    CategoricalDataset,
    DatasetError,
    dataset_stats,
    dedupe,
    load_csv,
    random_dataset,
)
from .evaluate import EvalReport, evaluate, format_rounded
from .kmodes import KModesConfig, run_kmodes
from .medoids import (
    EXHAUSTIVE_GATE,
    InstanceTooLargeError,
    LocalSearchConfig,
    audit_lemma1,
    audit_lemma2,
    exhaustive_search,
    exhaustive_search_naive,
    local_search,
)
from .metric import MatrixBudgetError, check_metric_properties, pairwise_matrix

DATA_DIR_ENV = "CATCLUSTER_DATA_DIR"

NAMED_DATASETS = {
    "votes": {
        "filename": "house-votes-84.data",
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/voting-records/house-votes-84.data",
        "rows": 435,
        "columns": 17,
        "label_column": 0,
    },
    "mushroom": {
        "filename": "agaricus-lepiota.data",
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/mushroom/agaricus-lepiota.data",
        "rows": 8124,
        "columns": 23,
        "label_column": 0,
    },
}

# Previously reported results on the two named datasets; `reproduce` prints
# measured values side by side with these. The approximation objective is
# compared under both readings (see evaluate module).
REFERENCE_RESULTS = {
    "votes": {
        "kmodes_error": "0.136",
        "kmodes_objective": 1706,
        "approx_error": "0.149",
        "approx_objective": 1701,
        "approx_algorithm": "exhaustive",
    },
    "mushroom": {
        "kmodes_error": "0.435",
        "kmodes_objective": 63015,
        "approx_error": "0.121",
        "approx_objective": 62512,
        "approx_algorithm": "local-search",
    },
}


class FetchError(RuntimeError):
    pass


def data_dir() -> Path:
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "catcluster"


def _candidate_paths(name: str) -> list[Path]:
    filename = NAMED_DATASETS[name]["filename"]
    return [data_dir() / filename, Path("data") / filename]


def dataset_path(name: str) -> Path | None:
    """First existing location of a named dataset file, if any."""
    for p in _candidate_paths(name):
        if p.exists():
            return p
    return None


def _check_named_shape(ds: CategoricalDataset, name: str, path) -> None:
    info = NAMED_DATASETS[name]
    if ds.total_weight != info["rows"] or ds.m != info["columns"] - 1:
        raise FetchError(
            f"{path} does not look like the {name} dataset: expected "
            f"{info['rows']} rows x {info['columns']} columns, found "
            f"{ds.total_weight} rows x {ds.m + 1} columns"
        )


def load_named(name: str, path=None) -> CategoricalDataset:
    """Load one of the named datasets from an explicit path or the cache."""
    info = NAMED_DATASETS[name]
    p = Path(path) if path else dataset_path(name)
    if p is None or not p.exists():
        searched = ", ".join(str(c) for c in _candidate_paths(name))
        raise FetchError(
            f"dataset {name!r} not found (searched {searched}); run "
            f"`catcluster fetch --name {name}` or place {info['filename']} "
            f"in one of those directories ({DATA_DIR_ENV} overrides the cache)"
        )
    ds = load_csv(p, label_column=info["label_column"])
    _check_named_shape(ds, name, p)
    return ds


def _source_urls(sources_path=None) -> dict:
    """Per-dataset download URLs: built-in defaults, overridable by a JSON
    config file mapping dataset name to URL."""
    urls = {name: info["url"] for name, info in NAMED_DATASETS.items()}
    if sources_path:
        try:
            overrides = json.loads(Path(sources_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise FetchError(f"could not read source config {sources_path}: {exc}") from exc
        unknown = set(overrides) - set(urls)
        if unknown:
            raise FetchError(f"unknown dataset names in {sources_path}: {sorted(unknown)}")
        urls.update(overrides)
    return urls


def fetch_dataset(
    name: str, dest_dir=None, refresh: bool = False, timeout: float = 60.0, sources_path=None
) -> Path:
    info = NAMED_DATASETS[name]
    url = _source_urls(sources_path)[name]
    directory = Path(dest_dir) if dest_dir else data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    dest = directory / info["filename"]
    if dest.exists() and not refresh:
        return dest
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = resp.read()
    except (urllib.error.URLError, OSError) as exc:
        raise FetchError(
            f"could not download {name} from {url} ({exc}); "
            f"place the file manually at {dest}"
        ) from exc
    tmp = dest.with_suffix(dest.suffix + ".part")
    tmp.write_bytes(payload)
    tmp.replace(dest)
    try:
        _check_named_shape(load_csv(dest, label_column=info["label_column"]), name, dest)
    except (FetchError, DatasetError):
        dest.unlink(missing_ok=True)  # a bad file must not satisfy the next cache lookup
        raise
    return dest


def _assignment_digest(assignment: np.ndarray) -> str:
    return hashlib.sha256(np.asarray(assignment, dtype=np.int64).tobytes()).hexdigest()


def _compact_assignment(assignment: np.ndarray, k: int):
    """Drop empty clusters, remapping ids to 0..k_eff-1; returns the dropped ids."""
    present = np.unique(assignment)
    if present.size == k:
        return assignment, k, []
    compact = np.searchsorted(present, assignment)
    dropped = sorted(set(range(k)) - {int(c) for c in present})
    return compact, int(present.size), dropped


def _solution_common(ds: CategoricalDataset, assignment: np.ndarray, k: int) -> dict:
    weights = np.bincount(assignment, weights=ds.weights, minlength=k)
    return {
        "cluster_weights": [int(w) for w in weights],
        "assignment_sha256": _assignment_digest(assignment),
    }


def _evaluation_section(ds, assignment, k, medoid_objective=None):
    """(report | None, objectives dict); labels are optional, objectives are not."""
    from .evaluate import objective_under_modes

    report = None
    if ds.labels is not None:
        report = evaluate(ds, assignment, medoid_objective=medoid_objective, k=k)
        mode_objective = report.mode_objective
    else:
        mode_objective = objective_under_modes(ds, assignment, k=k)
    objectives = {
        "mode_objective": int(mode_objective),
        "medoid_objective": None if medoid_objective is None else int(medoid_objective),
    }
    return report, objectives


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        rows = []
        for key in sorted(obj):
            rows.extend(_flatten(obj[key], f"{prefix}{key}."))
        return rows
    if isinstance(obj, (list, tuple)):
        return [(prefix[:-1], json.dumps(obj, sort_keys=True))]
    if obj is None:
        return [(prefix[:-1], "")]
    if isinstance(obj, bool):
        return [(prefix[:-1], "true" if obj else "false")]
    return [(prefix[:-1], str(obj))]


def _emit(record: dict, fmt: str, output, text: str | None = None) -> None:
    if fmt == "json":
        payload = json.dumps(record, sort_keys=True, indent=2) + "\n"
    elif fmt == "tsv":
        payload = "".join(f"{key}\t{value}\n" for key, value in _flatten(record))
    else:
        payload = (text or json.dumps(record, sort_keys=True, indent=2)) + "\n"
    if output:
        Path(output).write_text(payload)
    else:
        sys.stdout.write(payload)


def _parse_label_column(s):
    if s is None:
        return None
    try:
        return int(s)
    except ValueError:
        return s


def _load_run_dataset(args) -> CategoricalDataset:
    ds = load_csv(
        args.data,
        label_column=_parse_label_column(args.label_column),
        missing_token=args.missing_token,
        missing_policy=args.missing_policy,
        header=args.header,
    )
    return dedupe(ds) if args.dedupe else ds


def _run_text(record: dict, report: EvalReport | None) -> str:
    cfg, data, obj = record["config"], record["dataset"], record["objectives"]
    lines = [
        f"catcluster {record['version']}  {cfg['algorithm']}  k={cfg['k']}  seed={cfg['seed']}",
        f"data: {data['path']}  n={data['n']}  m={data['m']}  distinct={data['distinct_values']}",
    ]
    sol = record["solution"]
    if cfg["algorithm"] == "kmodes":
        lines.append(f"iterations: {sol['iterations']}  converged: {sol['converged']}")
    else:
        lines.append(f"medoid indices: {sol['medoid_indices']}  guarantee: {sol['guarantee']}")
    if report is not None:
        lines.append(report.to_text())
    else:
        lines.append(f"mode objective    {obj['mode_objective']}")
        if obj["medoid_objective"] is not None:
            lines.append(f"medoid objective  {obj['medoid_objective']}")
    return "\n".join(lines)


def cmd_run(args) -> int:
    t0 = time.perf_counter()
    ds = _load_run_dataset(args)
    t_load = time.perf_counter() - t0

    t1 = time.perf_counter()
    if args.algorithm == "kmodes":
        config = KModesConfig(
            k=args.k, init=args.init, seed=args.seed, max_iterations=args.max_iterations
        )
        result = run_kmodes(ds, config, debug=args.debug)
        assignment, k, dropped = _compact_assignment(result.assignment, args.k)
        solution = {
            "algorithm": "kmodes",
            "iterations": result.iterations,
            "converged": result.converged,
            "modes": [ds.decode(mode) for mode in result.modes],
            **_solution_common(ds, assignment, k),
        }
        if args.debug and result.objective_history is not None:
            solution["objective_history"] = list(result.objective_history)
            solution["reseeded_iterations"] = list(result.reseeded_iterations)
        medoid_objective = None
    else:
        if args.algorithm == "exhaustive":
            sol = exhaustive_search(ds, args.k, workers=args.threads, force=args.force)
        else:
            config = LocalSearchConfig(
                p=args.p,
                seed=args.seed,
                min_relative_improvement=args.min_relative_improvement,
                max_steps=args.max_steps,
                restarts=args.restarts,
            )
            sol = local_search(ds, args.k, config)
        assignment, k, dropped = _compact_assignment(sol.assignment, args.k)
        solution = {
            "algorithm": sol.algorithm,
            "medoid_indices": [int(i) for i in sol.medoid_indices],
            "medoids": [ds.decode(ds.values[i]) for i in sol.medoid_indices],
            "guarantee": sol.guarantee,
            **_solution_common(ds, assignment, k),
        }
        medoid_objective = sol.medoid_objective
    if dropped:
        solution["empty_clusters_dropped"] = dropped
    t_solve = time.perf_counter() - t1

    t2 = time.perf_counter()
    report, objectives = _evaluation_section(ds, assignment, k, medoid_objective)
    t_eval = time.perf_counter() - t2

    stats = dataset_stats(ds)
    record = {
        "version": __version__,
        "command": "run",
        "config": {
            "algorithm": args.algorithm,
            "k": args.k,
            "seed": args.seed,
            "init": args.init,
            "max_iterations": args.max_iterations,
            "p": args.p,
            "restarts": args.restarts,
            "min_relative_improvement": args.min_relative_improvement,
            "max_steps": args.max_steps,
            "dedupe": args.dedupe,
            "data": str(args.data),
            "label_column": args.label_column,
            "header": args.header,
            "missing_token": args.missing_token,
            "missing_policy": args.missing_policy,
        },
        "dataset": {
            "path": str(args.data),
            "n": stats["n"],
            "n_records": stats["n_records"],
            "m": stats["m"],
            "distinct_values": ds.distinct_value_count(),
            "label_histogram": stats["label_histogram"],
        },
        "solution": solution,
        "objectives": objectives,
        "evaluation": None if report is None else report.to_dict(),
    }
    timings = {
        "load_s": round(t_load, 6),
        "solve_s": round(t_solve, 6),
        "evaluate_s": round(t_eval, 6),
    }
    if args.timings:
        record["timings"] = timings
    print(
        f"timings[s]: load={timings['load_s']:.3f} solve={timings['solve_s']:.3f} "
        f"evaluate={timings['evaluate_s']:.3f}",
        file=sys.stderr,
    )
    _emit(record, args.format, args.output, text=_run_text(record, report))
    return 0


def _deviation_rows(measured: dict, ref: dict) -> list[tuple[str, str, str, str]]:
    rows = []

    def err_row(label, measured_frac, ref_str):
        dev = float(measured_frac - Fraction(ref_str))
        rows.append((label, format_rounded(measured_frac), ref_str, f"{dev:+.3f}"))

    def obj_row(label, measured_val, ref_val):
        dev = (measured_val - ref_val) / ref_val * 100.0
        rows.append((label, str(measured_val), str(ref_val), f"{dev:+.2f}%"))

    err_row("kmodes error", measured["kmodes_error"], ref["kmodes_error"])
    obj_row("kmodes objective", measured["kmodes_objective"], ref["kmodes_objective"])
    err_row("approx error", measured["approx_error"], ref["approx_error"])
    obj_row("approx objective (medoid)", measured["approx_medoid_objective"], ref["approx_objective"])
    obj_row("approx objective (mode refit)", measured["approx_mode_objective"], ref["approx_objective"])
    return rows


def cmd_reproduce(args) -> int:
    name = args.table
    ref = REFERENCE_RESULTS[name]
    ds = dedupe(load_named(name, path=args.data))

    km = run_kmodes(ds, KModesConfig(k=2, init="first-k-distinct"))
    km_assignment, km_k, _ = _compact_assignment(km.assignment, 2)
    km_report = evaluate(ds, km_assignment, k=km_k)

    if ref["approx_algorithm"] == "exhaustive":
        sol = exhaustive_search(ds, 2, workers=args.threads)
    else:
        sol = local_search(
            ds, 2, LocalSearchConfig(p=1, seed=args.seed, restarts=5)
        )
    ap_assignment, ap_k, _ = _compact_assignment(sol.assignment, 2)
    ap_report = evaluate(ds, ap_assignment, medoid_objective=sol.medoid_objective, k=ap_k)

    measured = {
        "kmodes_error": km_report.error,
        "kmodes_objective": km_report.mode_objective,
        "approx_error": ap_report.error,
        "approx_medoid_objective": ap_report.medoid_objective,
        "approx_mode_objective": ap_report.mode_objective,
    }
    rows = _deviation_rows(measured, ref)

    header = ("quantity", "measured", "reference", "deviation")
    widths = [max(len(r[c]) for r in [header, *rows]) for c in range(4)]
    text_lines = [
        f"{name} reproduction (k=2, first-k-distinct, approx={ref['approx_algorithm']})",
        "  ".join(h.ljust(w) for h, w in zip(header, widths)),
    ]
    text_lines += ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)) for r in rows]

    record = {
        "version": __version__,
        "command": "reproduce",
        "table": name,
        "reference": ref,
        "measured": {
            "kmodes_error": format_rounded(measured["kmodes_error"]),
            "kmodes_error_exact": str(measured["kmodes_error"]),
            "kmodes_objective": measured["kmodes_objective"],
            "approx_error": format_rounded(measured["approx_error"]),
            "approx_error_exact": str(measured["approx_error"]),
            "approx_medoid_objective": measured["approx_medoid_objective"],
            "approx_mode_objective": measured["approx_mode_objective"],
        },
        "deviation": {label: dev for label, _, _, dev in rows},
        "kmodes_confusion": km_report.confusion.to_lists(),
        "approx_confusion": ap_report.confusion.to_lists(),
    }
    _emit(record, args.format, args.output, text="\n".join(text_lines))
    return 0


def _verify_dataset(args) -> CategoricalDataset:
    if args.name:
        return dedupe(load_named(args.name, path=args.data))
    if args.data:
        ds = load_csv(
            args.data,
            label_column=_parse_label_column(args.label_column),
            header=args.header,
        )
        return dedupe(ds)
    raise DatasetError(f"suite {args.suite!r} needs --name or --data")


def _verify_oracle(trials: int, seed: int):
    rng = np.random.default_rng(seed)
    violations = []
    for _ in range(trials):
        n = int(rng.integers(2, 41))
        m = int(rng.integers(1, 7))
        cats = int(rng.integers(2, 5))
        k = int(rng.integers(1, min(3, n) + 1))
        inst_seed = int(rng.integers(0, 2**63 - 1))
        inst = random_dataset(n=n, m=m, max_categories=cats, seed=inst_seed)
        pruned = exhaustive_search(inst, k)
        naive = exhaustive_search_naive(inst, k)
        if (pruned.medoid_objective, pruned.medoid_indices) != (
            naive.medoid_objective,
            naive.medoid_indices,
        ):
            violations.append(
                {
                    "instance_seed": inst_seed,
                    "n": n,
                    "k": k,
                    "pruned": [pruned.medoid_objective, list(pruned.medoid_indices)],
                    "naive": [naive.medoid_objective, list(naive.medoid_indices)],
                }
            )
    return violations


def cmd_verify(args) -> int:
    defaults = {"metric": 100000, "lemma1": 1000, "lemma2": 200, "oracle": 50}
    trials = args.trials if args.trials is not None else defaults[args.suite]
    detail: dict = {}

    if args.suite == "metric":
        ds = _verify_dataset(args)
        report = check_metric_properties(ds, trials, args.seed)
        violations = [{"triple": list(t), "axiom": a} for t, a in report.violations]
        detail["triples_checked"] = report.triples_checked
    elif args.suite == "lemma1":
        ds = _verify_dataset(args)
        report = audit_lemma1(ds, trials, args.seed)
        violations = [
            {"subset_size": len(s), "medoid_cost": mc, "mode_cost": oc}
            for s, mc, oc in report.violations
        ]
        detail["max_ratio"] = report.max_ratio
        detail["histogram"] = [list(b) for b in report.histogram]
    elif args.suite == "lemma2":
        report = audit_lemma2(trials, args.seed)
        violations = [
            {"instance_seed": s, "medoid_optimum": a, "mode_optimum": b}
            for s, a, b in report.violations
        ]
        detail["max_ratio"] = report.max_ratio
    else:
        violations = _verify_oracle(trials, args.seed)

    passed = not violations
    record = {
        "version": __version__,
        "command": "verify",
        "suite": args.suite,
        "trials": trials,
        "seed": args.seed,
        "violations": violations,
        "passed": passed,
        **detail,
    }
    summary = f"verify {args.suite}: trials={trials} violations={len(violations)} -> " + (
        "pass" if passed else "FAIL"
    )
    if args.suite in ("lemma1", "lemma2"):
        summary += f" (max ratio {detail['max_ratio']:.4f}, bound 2)"
    _emit(record, args.format, args.output, text=summary)
    return 0 if passed else 1


def cmd_fetch(args) -> int:
    names = list(NAMED_DATASETS) if args.name == "all" else [args.name]
    for name in names:
        dest = fetch_dataset(
            name,
            dest_dir=args.data_dir,
            refresh=args.refresh,
            timeout=args.timeout,
            sources_path=args.sources,
        )
        print(f"{name}: {dest}")
    return 0


def cmd_bench(args) -> int:
    ds = random_dataset(n=args.n, m=args.m, max_categories=args.categories, seed=args.seed)
    t0 = time.perf_counter()
    pairwise_matrix(ds, workers=args.threads)
    t_matrix = time.perf_counter() - t0

    if args.algorithm == "exhaustive":
        sol = exhaustive_search(ds, args.k, workers=args.threads, force=True)
    else:
        sol = local_search(ds, args.k, LocalSearchConfig(p=args.p, seed=args.seed))
    print(f"pairwise_matrix: n={args.n} m={args.m}  {t_matrix:.3f}s")
    print(
        f"{args.algorithm}: k={args.k}  objective={sol.medoid_objective}  {sol.elapsed:.3f}s"
    )
    return 0


def _add_output_options(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--format", choices=["json", "tsv", "text"], default=default_format)
    p.add_argument("--output", help="write the report here instead of stdout")


def _add_ingestion_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--label-column", default=None, help="class column, by index or by header name")
    p.add_argument("--header", action="store_true", help="first row is a header")
    p.add_argument("--missing-token", default="?")
    p.add_argument("--missing-policy", choices=["treat-as-category", "reject"], default="treat-as-category")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catcluster",
        description="Clustering for categorical data: k-modes and member-restricted k-median.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fetch = sub.add_parser("fetch", help="download the named datasets into the cache")
    p_fetch.add_argument("--name", choices=[*NAMED_DATASETS, "all"], default="all")
    p_fetch.add_argument("--data-dir", default=None, help=f"override cache dir (default: ${DATA_DIR_ENV} or ~/.cache/catcluster)")
    p_fetch.add_argument("--refresh", action="store_true", help="re-download even if present")
    p_fetch.add_argument("--timeout", type=float, default=60.0)
    p_fetch.add_argument("--sources", default=None,
                         help="JSON file mapping dataset name to download URL (overrides the defaults)")
    p_fetch.set_defaults(func=cmd_fetch)

    p_run = sub.add_parser("run", help="cluster a CSV file and report quality")
    p_run.add_argument("--data", required=True)
    _add_ingestion_options(p_run)
    p_run.add_argument("--dedupe", action="store_true",
                       help="merge identical records into weighted ones (same results, faster)")
    p_run.add_argument("--algorithm", choices=["kmodes", "exhaustive", "local-search"], required=True)
    p_run.add_argument("--k", type=int, required=True)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--init", choices=["first-k-distinct", "random"], default="first-k-distinct")
    p_run.add_argument("--max-iterations", type=int, default=100)
    p_run.add_argument("--p", type=int, default=1, help="local-search swap width")
    p_run.add_argument("--restarts", type=int, default=1)
    p_run.add_argument("--min-relative-improvement", type=float, default=1e-9)
    p_run.add_argument("--max-steps", type=int, default=1000)
    p_run.add_argument("--force", action="store_true",
                       help=f"run exhaustive enumeration past {EXHAUSTIVE_GATE} records")
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--debug", action="store_true", help="record and assert per-iteration objectives")
    p_run.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    _add_output_options(p_run)
    p_run.set_defaults(func=cmd_run)

    p_rep = sub.add_parser("reproduce", help="rerun the reference experiments and compare")
    p_rep.add_argument("--table", choices=list(REFERENCE_RESULTS), required=True)
    p_rep.add_argument("--data", default=None, help="explicit dataset file (otherwise the cache is searched)")
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--threads", type=int, default=1)
    _add_output_options(p_rep, default_format="text")
    p_rep.set_defaults(func=cmd_reproduce)

    p_ver = sub.add_parser("verify", help="run a property audit; exit 1 on any violation")
    p_ver.add_argument("--suite", choices=["metric", "lemma1", "lemma2", "oracle"], required=True)
    p_ver.add_argument("--name", choices=list(NAMED_DATASETS), default=None)
    p_ver.add_argument("--data", default=None)
    _add_ingestion_options(p_ver)
    p_ver.add_argument("--trials", type=int, default=None)
    p_ver.add_argument("--seed", type=int, default=0)
    _add_output_options(p_ver, default_format="text")
    p_ver.set_defaults(func=cmd_verify)

    p_bench = sub.add_parser("bench", help="time the distance matrix and a solver on random data")
    p_bench.add_argument("--n", type=int, default=1000)
    p_bench.add_argument("--m", type=int, default=16)
    p_bench.add_argument("--categories", type=int, default=4)
    p_bench.add_argument("--k", type=int, default=2)
    p_bench.add_argument("--p", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--algorithm", choices=["exhaustive", "local-search"], default="local-search")
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, FetchError, InstanceTooLargeError, MatrixBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
