"""Multi-run experiment execution and trace-file I/O.

Each run writes ``traces/{algorithm}_{function}_{dim}d_run{index}.csv``
under the output directory. Everything downstream (tables, plots) is
recomputed from those files, so ``report`` and ``plot`` can be rerun
without repeating the optimisation.
"""

import csv
import io
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import RUNNERS, BaselineParams
from .benchmarks import make_function
from .metrics import TRACE_COLUMNS, RunRecord
from .niching import CnParams, counter_niching_ea
from .rng import ALGORITHM_IDS, FUNCTION_IDS, derive_seed

logger = logging.getLogger(__name__)

TRACE_NAME = re.compile(r"^(?P<algorithm>[a-z0-9]+)_(?P<function>[a-z0-9]+)_(?P<dim>\d+)d"
                        r"_run(?P<run>\d+)\.csv$")


def trace_name(algorithm, function, dim, run):
    return f"{algorithm}_{function}_{dim}d_run{run}.csv"


def trace_to_csv(record):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for g, err, mean, div in record.trace:
        w.writerow((int(g), repr(float(err)), repr(float(mean)), repr(float(div))))
    return buf.getvalue()


def write_trace(record, path):
    Path(path).write_text(trace_to_csv(record))


def read_trace(path):
    """Load a trace file back into a :class:`RunRecord` (no final genome)."""
    path = Path(path)
    m = TRACE_NAME.match(path.name)
    if m is None:
        raise ValueError(f"not a trace file name: {path.name}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != TRACE_COLUMNS:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    trace = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    return RunRecord(m["algorithm"], m["function"], int(m["dim"]), -1, trace, float(trace[-1, 1]))


def trace_sort_key(path):
    m = TRACE_NAME.match(Path(path).name)
    return (ALGORITHM_IDS.index(m["algorithm"]), FUNCTION_IDS.index(m["function"]),
            int(m["dim"]), int(m["run"]))


def list_traces(directory):
    files = [p for p in Path(directory).iterdir() if TRACE_NAME.match(p.name)]
    return sorted(files, key=trace_sort_key)


def load_traces(directory):
    """``{(algorithm, function, dim): [RunRecord, ...]}`` ordered by run index."""
    groups = {}
    for path in list_traces(directory):
        rec = read_trace(path)
        groups.setdefault((rec.algorithm, rec.function, rec.dim), []).append(rec)
    return groups


def run_single(algorithm, function, dim, max_gen, seed, cn_params=None, cnea_n=300,
               baseline_params=None, rotation_seed=0):
    """One deterministic run; every random draw comes from ``seed``."""
    fn = make_function(function, dim, rotation_seed=rotation_seed)
    rng = np.random.default_rng(seed)
    if algorithm == "cnea":
        return counter_niching_ea(fn, cn_params or CnParams(), cnea_n, max_gen, rng, seed)
    if algorithm not in RUNNERS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return RUNNERS[algorithm](fn, baseline_params or BaselineParams(), max_gen, rng, seed)


@dataclass
class RunTask:
    algorithm: str
    function: str
    dim: int
    run: int
    seed: int
    max_gen: int
    path: str


def plan_runs(cfg, trace_dir):
    tasks = []
    for algorithm in cfg.algorithms:
        for function in cfg.functions:
            for dim in cfg.dims:
                for run in range(cfg.runs):
                    seed = derive_seed(cfg.master_seed, algorithm, function, dim, run)
                    path = os.path.join(trace_dir, trace_name(algorithm, function, dim, run))
                    tasks.append(RunTask(algorithm, function, dim, run, seed,
                                         cfg.gens_for(dim), path))
    return tasks


def _execute(args):
    task, cfg = args
    record = run_single(task.algorithm, task.function, task.dim, task.max_gen, task.seed,
                        cn_params=cfg.cn_params(), cnea_n=cfg.cnea_n(),
                        baseline_params=cfg.baseline_params(), rotation_seed=cfg.rotation_seed)
    write_trace(record, task.path)
    return task.path, record.final_best_error


@dataclass
class ReportBundle:
    output_dir: Path
    trace_files: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    plots: list = field(default_factory=list)


def run_experiment(cfg, workers=None, plots=True):
    """Execute every (algorithm, function, dim, run) of ``cfg`` and write the reports.

    Outputs are byte-identical for a given config whatever ``workers`` is.
    """
    from .plots import emit_svg_plots
    from .reports import write_reports

    workers = cfg.workers if workers is None else workers
    out = Path(cfg.output_dir)
    trace_dir = out / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)
    tasks = plan_runs(cfg, str(trace_dir))
    logger.info("running %d tasks on %d worker(s)", len(tasks), workers)
    jobs = [(t, cfg) for t in tasks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_execute, jobs))
    else:
        done = [_execute(j) for j in jobs]
    for path, err in done:
        logger.debug("%s final error %r", path, err)
    bundle = ReportBundle(out, [Path(p) for p, _ in done])
    groups = load_traces(trace_dir)
    bundle.tables = write_reports(groups, out, cfg.t_test, cfg.diversity_window)
    if plots:
        bundle.plots = emit_svg_plots(groups, out / "plots")
    return bundle
