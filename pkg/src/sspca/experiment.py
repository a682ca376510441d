"""Replicated benchmark runs over a grid of spiked-model parameters.

A configuration is a YAML mapping::

    name: seed-sweep-small
    master_seed: 2024
    replications: 25
    workers: 1
    output: {dir: results/seed_sweep, format: csv}
    model:
      n: [400]
      p: [400]            # or p_equals_n: true
      k: [8]              # or k_over_sqrt_n: [0.1, 0.2]
      beta: [0.5]
      sign_model: [USPCA]
      support_policy: random
    algorithms:
      - {name: sspca, k_star: [0, 1, 2], f1: F_L1, ignore_diagonal: true, f2: F_LAMBDA1}
      - {name: dt}
      - {name: ct, grid_size: 50, selector: ORACLE}
      - {name: exhaustive, budget: 20000}
      - {name: seeded_greedy, seed_size: "k/3", f1: F_AVG}

The grid is the Cartesian product of the model lists, in the order
``n, p, k, beta, sign_model``. Trial ``(grid_id, replication)`` samples its
instance from ``derive_seed(master_seed, grid_id, replication)`` and every
algorithm in that trial sees the same covariance.

Output files in the output directory:

``trials.csv``
    ``grid_id, n, p, k, beta, sign_model, replication, rng_seed, algorithm,
    settings, support, success_rate, f2_value, greedy_calls, error``.
    ``support`` is semicolon-joined ascending indices, ``f2_value`` is the
    largest eigenvalue of the chosen principal submatrix, floats use 9
    significant digits. No timing data, so the file is reproducible byte for
    byte.
``timings.csv``
    ``grid_id, replication, algorithm, wall_ms``.
``summary.csv`` / ``summary.json``
    Mean and standard deviation of the success rate per grid point and
    algorithm (the JSON adds mean wall time).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import yaml

from .algorithms import (
    CtSelector,
    GreedyVariant,
    SspcaConfig,
    covariance_thresholding,
    default_thresholds,
    diagonal_thresholding,
    exhaustive_search,
    greedy_spca,
    sspca,
)
from .analysis import success_rate
from .exceptions import ConfigError, SspcaError
from .model import SignModel, SpikedModelParams, SupportPolicy, sample_covariance
from .scorers import F_LAMBDA1, ScoreFunction, ScoreKind, score_set
from .subsets import n_subsets

__all__ = [
    "AlgorithmSpec",
    "ExperimentConfig",
    "TrialResult",
    "Plan",
    "derive_seed",
    "parse_config",
    "load_config",
    "plan",
    "run_experiment",
    "run_trial",
    "summarize",
    "emit_csv",
    "read_csv",
    "write_outputs",
    "read_external",
    "CALL_GUARD",
]

CALL_GUARD = 10**9
ALGORITHM_NAMES = ("sspca", "dt", "ct", "exhaustive", "seeded_greedy")
CSV_COLUMNS = (
    "grid_id",
    "n",
    "p",
    "k",
    "beta",
    "sign_model",
    "replication",
    "rng_seed",
    "algorithm",
    "settings",
    "support",
    "success_rate",
    "f2_value",
    "greedy_calls",
    "error",
)
_SEED_SIZE = re.compile(r"^\s*k\s*/\s*(\d+)\s*$")


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    label: str
    options: tuple  # sorted (key, value) pairs

    @property
    def opts(self) -> dict:
        return dict(self.options)

    def settings_json(self) -> str:
        return json.dumps(self.opts, sort_keys=True, separators=(",", ":"))


@dataclass
class ExperimentConfig:
    grid: list[SpikedModelParams]
    algorithms: list[AlgorithmSpec]
    replications: int = 25
    master_seed: int = 0
    workers: int = 1
    output_dir: str = "results"
    output_format: str = "csv"
    name: str = "experiment"


@dataclass
class TrialResult:
    grid_id: int
    n: int
    p: int
    k: int
    beta: float
    sign_model: str
    replication: int
    rng_seed: int
    algorithm: str
    settings: str
    support: tuple
    success_rate: float
    f2_value: float
    greedy_calls: int
    error: str = ""
    wall_ms: float = 0.0


@dataclass
class Plan:
    trials: int
    algorithm_runs: int
    greedy_calls: int
    exhaustive_evaluations: int

    @property
    def work(self) -> int:
        return self.greedy_calls + self.exhaustive_evaluations


def derive_seed(master_seed: int, grid_id: int, replication: int) -> int:
    """64-bit instance seed hashed from the master seed and the trial coordinates."""
    ss = np.random.SeedSequence([int(master_seed), int(grid_id), int(replication)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _aux_rng(rng_seed: int, tag: int) -> np.random.Generator:
    # spawn keys 0 and 1 are taken by the instance sampler
    return np.random.default_rng(np.random.SeedSequence(rng_seed, spawn_key=(100 + tag,)))


def _as_list(value):
    if value is None:
        return None
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _int_ok(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _score_ok(value, problems, where):
    try:
        return ScoreFunction.parse(value)
    except ValueError:
        problems.append(f"{where}: unknown score function {value!r}")
        return None


def _parse_algorithms(items, problems) -> list[AlgorithmSpec]:
    out = []
    if not isinstance(items, list) or not items:
        problems.append("algorithms: expected a non-empty list")
        return out
    for pos, item in enumerate(items):
        where = f"algorithms[{pos}]"
        if not isinstance(item, dict) or "name" not in item:
            problems.append(f"{where}: expected a mapping with a 'name'")
            continue
        name = str(item["name"]).lower()
        label = item.get("label")
        if name not in ALGORITHM_NAMES:
            problems.append(f"{where}: unknown algorithm {item['name']!r} (known: {', '.join(ALGORITHM_NAMES)})")
            continue
        if name == "dt":
            out.append(AlgorithmSpec("dt", label or "dt", ()))
        elif name == "sspca":
            k_stars = _as_list(item.get("k_star", [1]))
            f1 = _score_ok(item.get("f1", "F_AVG"), problems, where)
            f2 = _score_ok(item.get("f2", "F_LAMBDA1"), problems, where)
            variant = str(item.get("variant", "BULK")).upper()
            if variant not in GreedyVariant.__members__:
                problems.append(f"{where}: unknown variant {variant!r}")
            ignore = bool(item.get("ignore_diagonal", False))
            for ks in k_stars:
                if not _int_ok(ks) or ks < 0:
                    problems.append(f"{where}: k_star must be a non-negative integer, got {ks!r}")
                    continue
                if f1 is None or f2 is None:
                    continue
                opts = {"k_star": ks, "f1": f1.kind.value, "f2": f2.kind.value, "ignore_diagonal": ignore, "variant": variant}
                out.append(AlgorithmSpec("sspca", label or f"sspca[k*={ks}]", tuple(sorted(opts.items()))))
        elif name == "ct":
            grid_size = item.get("grid_size", 50)
            selector = str(item.get("selector", "ORACLE")).upper()
            if not _int_ok(grid_size) or grid_size < 1:
                problems.append(f"{where}: grid_size must be a positive integer, got {grid_size!r}")
            if selector not in CtSelector.__members__:
                problems.append(f"{where}: unknown selector {selector!r}")
            opts = {"grid_size": grid_size, "selector": selector}
            out.append(AlgorithmSpec("ct", label or f"ct[{selector}]", tuple(sorted(opts.items()))))
        elif name == "exhaustive":
            budget = item.get("budget")
            if budget is not None and (not _int_ok(budget) or budget < 1):
                problems.append(f"{where}: budget must be a positive integer or null, got {budget!r}")
            f2 = _score_ok(item.get("f2", "F_LAMBDA1"), problems, where)
            if f2 is not None:
                opts = {"budget": budget, "f2": f2.kind.value}
                out.append(AlgorithmSpec("exhaustive", label or f"exhaustive[budget={budget}]", tuple(sorted(opts.items()))))
        elif name == "seeded_greedy":
            seed_size = item.get("seed_size", 1)
            frac = _SEED_SIZE.match(seed_size) if isinstance(seed_size, str) else None
            size_ok = (_int_ok(seed_size) and seed_size >= 0) or (frac is not None and int(frac.group(1)) > 0)
            if not size_ok:
                problems.append(f"{where}: seed_size must be a non-negative integer or 'k/<d>', got {seed_size!r}")
            f1 = _score_ok(item.get("f1", "F_AVG"), problems, where)
            variant = str(item.get("variant", "BULK")).upper()
            if variant not in GreedyVariant.__members__:
                problems.append(f"{where}: unknown variant {variant!r}")
            ignore = bool(item.get("ignore_diagonal", False))
            if f1 is not None and size_ok:
                opts = {"seed_size": seed_size, "f1": f1.kind.value, "ignore_diagonal": ignore, "variant": variant}
                out.append(
                    AlgorithmSpec("seeded_greedy", label or f"greedy[seed={seed_size}]", tuple(sorted(opts.items())))
                )
    labels = [a.label for a in out]
    dupes = sorted({x for x in labels if labels.count(x) > 1})
    if dupes:
        problems.append(f"algorithms: duplicate labels {dupes}; set 'label' explicitly")
    return out


def seed_size_for(spec_value, k: int) -> int:
    """Resolve ``seed_size`` (an int, or ``'k/<d>'`` meaning ``max(1, floor(k/d))``)."""
    if isinstance(spec_value, str):
        d = int(_SEED_SIZE.match(spec_value).group(1))
        return max(1, k // d)
    return int(spec_value)


def _parse_grid(model, problems) -> list[SpikedModelParams]:
    if not isinstance(model, dict):
        problems.append("model: expected a mapping")
        return []
    ns = _as_list(model.get("n"))
    if not ns:
        problems.append("model.n: required (list of sample counts)")
        ns = []
    tie = bool(model.get("p_equals_n", False))
    ps = _as_list(model.get("p"))
    if tie and ps:
        problems.append("model: give either p or p_equals_n, not both")
    if not tie and not ps:
        problems.append("model.p: required unless p_equals_n is true")
    ks = _as_list(model.get("k"))
    scaled = _as_list(model.get("k_over_sqrt_n"))
    if bool(ks) == bool(scaled):
        problems.append("model: give exactly one of k or k_over_sqrt_n")
    betas = _as_list(model.get("beta"))
    if not betas:
        problems.append("model.beta: required")
    signs = _as_list(model.get("sign_model", ["USPCA"]))
    policy = model.get("support_policy", "random")
    for s in signs:
        if str(s) not in SignModel.__members__:
            problems.append(f"model.sign_model: unknown value {s!r}")
    if policy not in [p.value for p in SupportPolicy]:
        problems.append(f"model.support_policy: unknown value {policy!r}")
    for key, vals in (("n", ns), ("p", ps or []), ("k", ks or [])):
        for v in vals:
            if not _int_ok(v):
                problems.append(f"model.{key}: expected integers, got {v!r}")
    for b in betas or []:
        if not isinstance(b, (int, float)) or isinstance(b, bool):
            problems.append(f"model.beta: expected numbers, got {b!r}")
    if problems:
        return []
    grid = []
    for n in ns:
        p_list = [n] if tie else ps
        k_list = ks if ks else [max(1, int(round(x * math.sqrt(n)))) for x in scaled]
        for p, k, beta, sign in itertools.product(p_list, k_list, betas, signs):
            try:
                grid.append(SpikedModelParams(n, p, k, float(beta), str(sign), policy))
            except ValueError as exc:
                problems.append(f"model grid point (n={n}, p={p}, k={k}, beta={beta}): {exc}")
    return grid


def parse_config(raw: dict, base_dir=None) -> ExperimentConfig:
    """Validate a config mapping, collecting every problem before raising ``ConfigError``."""
    problems: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError(["top level: expected a mapping"])
    known = {"name", "master_seed", "replications", "workers", "output", "model", "algorithms"}
    for key in sorted(set(raw) - known):
        problems.append(f"{key}: unknown key")
    reps = raw.get("replications", 25)
    if not _int_ok(reps) or reps < 1:
        problems.append(f"replications: must be an integer >= 1, got {reps!r}")
    seed = raw.get("master_seed", 0)
    if not _int_ok(seed) or not 0 <= seed < 2**64:
        problems.append(f"master_seed: must be an integer in [0, 2^64), got {seed!r}")
    workers = raw.get("workers", 1)
    if not _int_ok(workers) or workers < 1:
        problems.append(f"workers: must be an integer >= 1, got {workers!r}")
    output = raw.get("output", {}) or {}
    fmt = str(output.get("format", "csv")).lower() if isinstance(output, dict) else "csv"
    if fmt not in ("csv", "json"):
        problems.append(f"output.format: must be csv or json, got {fmt!r}")
    out_dir = output.get("dir", "results") if isinstance(output, dict) else "results"
    grid_problems: list[str] = []
    grid = _parse_grid(raw.get("model"), grid_problems)
    problems.extend(grid_problems)
    algorithms = _parse_algorithms(raw.get("algorithms"), problems)
    for params in grid:
        for alg in algorithms:
            o = alg.opts
            if alg.name == "sspca" and o["k_star"] > params.k:
                problems.append(f"{alg.label}: k_star={o['k_star']} exceeds k={params.k}")
            if alg.name == "seeded_greedy" and seed_size_for(o["seed_size"], params.k) > params.k:
                problems.append(f"{alg.label}: seed size exceeds k={params.k}")
    if problems:
        raise ConfigError(problems)
    if base_dir is not None and not os.path.isabs(out_dir):
        out_dir = str(Path(base_dir) / out_dir)
    return ExperimentConfig(
        grid=grid,
        algorithms=algorithms,
        replications=reps,
        master_seed=seed,
        workers=workers,
        output_dir=out_dir,
        output_format=fmt,
        name=str(raw.get("name", "experiment")),
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError([f"{path}: not valid YAML ({exc})"]) from exc
    return parse_config(raw)


def plan(cfg: ExperimentConfig) -> Plan:
    """Trial count and the total number of greedy completions the run will perform."""
    trials = len(cfg.grid) * cfg.replications
    calls = 0
    evals = 0
    for params in cfg.grid:
        for alg in cfg.algorithms:
            o = alg.opts
            if alg.name == "sspca":
                calls += n_subsets(params.p, o["k_star"])
            elif alg.name == "seeded_greedy":
                calls += 1
            elif alg.name == "exhaustive":
                total = n_subsets(params.p, params.k)
                evals += total if o["budget"] is None else min(total, o["budget"])
    return Plan(
        trials=trials,
        algorithm_runs=trials * len(cfg.algorithms),
        greedy_calls=calls * cfg.replications,
        exhaustive_evaluations=evals * cfg.replications,
    )


def _run_algorithm(alg: AlgorithmSpec, inst, inner_workers: int):
    m = inst.covariance
    k = inst.params.k
    o = alg.opts
    calls = 0
    if alg.name == "dt":
        found = diagonal_thresholding(m, k)
    elif alg.name == "sspca":
        cfg = SspcaConfig(
            k=k,
            k_star=o["k_star"],
            f1=ScoreFunction.parse(o["f1"], o["ignore_diagonal"]),
            f2=ScoreFunction.parse(o["f2"]),
            variant=o["variant"],
            worker_count=inner_workers,
        )
        res = sspca(m, cfg)
        found, calls = res.support, res.stats.greedy_calls
    elif alg.name == "seeded_greedy":
        size = seed_size_for(o["seed_size"], k)
        rng = _aux_rng(inst.rng_seed, 0)
        seed = rng.choice(np.asarray(inst.support), size=size, replace=False)
        found = greedy_spca(m, ScoreFunction.parse(o["f1"], o["ignore_diagonal"]), seed, k, o["variant"])
        calls = 1
    elif alg.name == "ct":
        thresholds = default_thresholds(m, o["grid_size"])
        res = covariance_thresholding(m, k, thresholds, o["selector"], truth=inst.support)
        found = res.selected
    elif alg.name == "exhaustive":
        found = exhaustive_search(m, k, ScoreFunction.parse(o["f2"]), o["budget"]).support
    else:  # pragma: no cover - parse_config rejects unknown names
        raise ValueError(alg.name)
    return tuple(found), calls


def run_trial(
    grid_id: int,
    params: SpikedModelParams,
    replication: int,
    algorithms,
    master_seed: int,
    inner_workers: int = 1,
    external=(),
) -> list[TrialResult]:
    """Sample one instance and run every algorithm (and external support set) on it."""
    rng_seed = derive_seed(master_seed, grid_id, replication)
    inst = sample_covariance(params, rng_seed)
    rows = []

    def row(label, settings, support, calls, error, wall):
        if support:
            rate = success_rate(support, inst.support)
            f2 = score_set(inst.covariance, support, F_LAMBDA1)
        else:
            rate, f2 = float("nan"), float("nan")
        return TrialResult(
            grid_id=grid_id,
            n=params.n,
            p=params.p,
            k=params.k,
            beta=params.beta,
            sign_model=params.sign_model.value,
            replication=replication,
            rng_seed=rng_seed,
            algorithm=label,
            settings=settings,
            support=tuple(support),
            success_rate=rate,
            f2_value=f2,
            greedy_calls=calls,
            error=error,
            wall_ms=wall,
        )

    for alg in algorithms:
        start = time.perf_counter()
        try:
            support, calls = _run_algorithm(alg, inst, inner_workers)
            error = ""
        except (SspcaError, ValueError, ArithmeticError) as exc:
            support, calls, error = (), 0, f"{type(exc).__name__}: {exc}"
        wall = (time.perf_counter() - start) * 1e3
        rows.append(row(alg.label, alg.settings_json(), support, calls, error, wall))
    for label, support in external:
        try:
            support = tuple(sorted(int(i) for i in support))
            if any(not 0 <= i < params.p for i in support):
                raise ValueError(f"index out of range for p={params.p}")
            error = ""
        except ValueError as exc:
            support, error = (), f"{type(exc).__name__}: {exc}"
        rows.append(row(f"external:{label}", "{}", support, 0, error, 0.0))
    return rows


def _trial_task(args):
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig, workers: int | None = None, external=None) -> list[TrialResult]:
    """Run every (grid point, replication) trial; results come back in canonical order.

    ``external`` maps ``(grid_id, replication)`` to a list of ``(label, support)``
    pairs produced by outside tools, scored on the same instance.
    """
    workers = cfg.workers if workers is None else workers
    external = external or {}
    tasks = []
    for gid, params in enumerate(cfg.grid):
        for rep in range(cfg.replications):
            tasks.append((gid, params, rep, cfg.algorithms, cfg.master_seed, 1, tuple(external.get((gid, rep), ()))))
    procs = min(workers, len(tasks))
    if procs > 1:
        inner = max(1, workers // procs)
        tasks = [t[:5] + (inner,) + t[6:] for t in tasks]
        with ProcessPoolExecutor(max_workers=procs) as pool:
            chunks = list(pool.map(_trial_task, tasks))
    else:
        inner = max(1, workers)
        chunks = [_trial_task(t[:5] + (inner,) + t[6:]) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.9g}"
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def trials_csv(results) -> str:
    rows = []
    for r in results:
        vals = []
        for col in CSV_COLUMNS:
            v = getattr(r, col)
            vals.append(";".join(str(i) for i in v) if col == "support" else _fmt(v))
        rows.append(vals)
    return _csv_text(CSV_COLUMNS, rows)


def summarize(results) -> list[dict]:
    """Per (grid point, algorithm): trial count, mean/std success, mean f2, greedy calls, errors."""
    groups: dict = {}
    for r in results:
        groups.setdefault((r.grid_id, r.algorithm), []).append(r)
    out = []
    for (gid, label), rows in groups.items():
        ok = [r for r in rows if not r.error]
        rates = np.array([r.success_rate for r in ok])
        f2 = np.array([r.f2_value for r in ok])
        first = rows[0]
        out.append(
            {
                "grid_id": gid,
                "n": first.n,
                "p": first.p,
                "k": first.k,
                "beta": first.beta,
                "sign_model": first.sign_model,
                "algorithm": label,
                "trials": len(rows),
                "errors": len(rows) - len(ok),
                "mean_success": float(rates.mean()) if ok else float("nan"),
                "std_success": float(rates.std(ddof=1)) if len(ok) > 1 else 0.0,
                "mean_f2": float(f2.mean()) if ok else float("nan"),
                "greedy_calls": int(sum(r.greedy_calls for r in rows)),
                "mean_wall_ms": float(np.mean([r.wall_ms for r in rows])),
            }
        )
    return out


SUMMARY_COLUMNS = (
    "grid_id",
    "n",
    "p",
    "k",
    "beta",
    "sign_model",
    "algorithm",
    "trials",
    "errors",
    "mean_success",
    "std_success",
    "mean_f2",
    "greedy_calls",
)


def emit_csv(results, path) -> Path:
    """Write ``trials.csv``-format rows to ``path`` and the summary as ``summary.csv`` beside it."""
    results = list(results)
    if not results:
        raise ValueError("no results to write")
    path = Path(path)
    try:
        path.write_text(trials_csv(results))
        summary = summarize(results)
        rows = [[_fmt(s[c]) for c in SUMMARY_COLUMNS] for s in summary]
        (path.parent / "summary.csv").write_text(_csv_text(SUMMARY_COLUMNS, rows))
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror}") from exc
    return path


def write_outputs(results, out_dir, fmt: str = "csv", meta=None) -> dict:
    """Write trials, summaries and timings to ``out_dir``; returns the paths written."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc.strerror}") from exc
    paths = {"trials": emit_csv(results, out_dir / "trials.csv"), "summary_csv": out_dir / "summary.csv"}
    try:
        timing_rows = [[r.grid_id, r.replication, r.algorithm, f"{r.wall_ms:.3f}"] for r in results]
        (out_dir / "timings.csv").write_text(
            _csv_text(("grid_id", "replication", "algorithm", "wall_ms"), timing_rows)
        )
        summary = {"meta": meta or {}, "groups": summarize(results)}
        (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        paths["timings"] = out_dir / "timings.csv"
        paths["summary_json"] = out_dir / "summary.json"
        if fmt == "json":
            data = [{c: getattr(r, c) for c in CSV_COLUMNS} for r in results]
            (out_dir / "trials.json").write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
            paths["trials_json"] = out_dir / "trials.json"
    except OSError as exc:
        raise OSError(f"cannot write results to {out_dir}: {exc.strerror}") from exc
    return paths


def read_csv(path) -> list[TrialResult]:
    """Parse a ``trials.csv`` file back into ``TrialResult`` rows (``wall_ms`` is 0)."""
    types = {f.name: f.type for f in fields(TrialResult)}
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            kw = {}
            for col in CSV_COLUMNS:
                raw = rec[col]
                if col == "support":
                    kw[col] = tuple(int(x) for x in raw.split(";")) if raw else ()
                elif types[col] in ("int", int):
                    kw[col] = int(raw)
                elif types[col] in ("float", float):
                    kw[col] = float(raw)
                else:
                    kw[col] = raw
            out.append(TrialResult(**kw))
    return out


def read_external(path) -> dict:
    """Load externally produced supports: CSV with ``grid_id, replication, label, support``."""
    table: dict = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"grid_id", "replication", "label", "support"} - set(reader.fieldnames or ())
        if missing:
            raise ConfigError([f"{path}: missing columns {sorted(missing)}"])
        for line, rec in enumerate(reader, start=2):
            try:
                key = (int(rec["grid_id"]), int(rec["replication"]))
                support = [int(x) for x in rec["support"].split(";") if x.strip()]
            except ValueError as exc:
                raise ConfigError([f"{path}:{line}: {exc}"]) from exc
            table.setdefault(key, []).append((rec["label"], support))
    return table
