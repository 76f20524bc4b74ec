"""CSV tables: per-run error statistics, algorithm comparison, diversity, p-values."""

import csv
import io
import math
from pathlib import Path

from .metrics import AggregateStats, aggregate_runs, improvement_phase_diversity, t_test_two_tailed
from .rng import ALGORITHM_IDS, FUNCTION_IDS

MISSING = "-"
BASELINE_IDS = ("sea", "socea", "cea", "dgea")
TABLE2_COLUMNS = BASELINE_IDS + ("cnea",)


def _fmt(v):
    if v is None:
        return MISSING
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def _to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def final_errors(groups):
    """``{(algorithm, function, dim): [final error per run]}``."""
    return {key: [r.final_best_error for r in recs] for key, recs in groups.items()}


def emit_aggregates(errors):
    """One row per (algorithm, function, dim) with the sorted-run statistics."""
    rows = []
    for (algo, fid, dim), errs in _ordered(errors):
        if len(errs) < 2:
            continue
        st = aggregate_runs(errs)
        rows.append([algo, fid, dim, len(errs)] + [st.as_dict()[k] for k in AggregateStats.STATISTICS])
    return _to_csv(("algorithm", "function", "dim", "runs") + AggregateStats.STATISTICS, rows)


def emit_table1(errors):
    """Error statistics per dimension, one column per function.

    ``errors`` maps ``(function, dim)`` to the per-run final errors of one
    algorithm. Cells without data (or with fewer than two runs) hold ``-``.
    """
    dims = sorted({dim for _, dim in errors})
    stats = {key: aggregate_runs(v).as_dict() for key, v in errors.items() if len(v) >= 2}
    rows = []
    for dim in dims:
        for stat in AggregateStats.STATISTICS:
            rows.append([dim, stat] + [stats[(f, dim)][stat] if (f, dim) in stats else None
                                       for f in FUNCTION_IDS])
    return _to_csv(("dim", "statistic") + FUNCTION_IDS, rows)


def _mean(values):
    return math.fsum(values) / len(values)


def emit_table2(errors):
    """Mean final error per (function, dim) and algorithm."""
    cells = sorted({(f, d) for _, f, d in errors},
                   key=lambda c: (c[1], FUNCTION_IDS.index(c[0])))
    rows = []
    for fid, dim in cells:
        rows.append([fid, dim] + [_mean(errors[(a, fid, dim)]) if errors.get((a, fid, dim)) else None
                                  for a in TABLE2_COLUMNS])
    return _to_csv(("function", "dim") + TABLE2_COLUMNS, rows)


def emit_table3(groups, window=5):
    """Mean improvement-phase diversity per (algorithm, function), one column per dim."""
    dims = sorted({d for _, _, d in groups})
    pairs = sorted({(a, f) for a, f, _ in groups},
                   key=lambda p: (ALGORITHM_IDS.index(p[0]), FUNCTION_IDS.index(p[1])))
    rows = []
    for algo, fid in pairs:
        row = [algo, fid]
        for dim in dims:
            recs = groups.get((algo, fid, dim))
            row.append(_mean([improvement_phase_diversity(r, window) for r in recs]) if recs else None)
        rows.append(row)
    return _to_csv(("algorithm", "function") + tuple(str(d) for d in dims), rows)


def emit_pvalue_table(errors, mode="pooled", reference="cnea"):
    """Two-tailed t-test of ``reference`` against each baseline, per (function, dim)."""
    cells = sorted({(f, d) for a, f, d in errors if a == reference},
                   key=lambda c: (c[1], FUNCTION_IDS.index(c[0])))
    header = ["function", "dim"]
    for b in BASELINE_IDS:
        header += [f"p_{b}", f"t_{b}", f"df_{b}"]
    rows = []
    for fid, dim in cells:
        row = [fid, dim]
        ref = errors.get((reference, fid, dim), [])
        for b in BASELINE_IDS:
            other = errors.get((b, fid, dim), [])
            if len(ref) < 2 or len(other) < 2:
                row += [None, None, None]
                continue
            res = t_test_two_tailed(ref, other, mode)
            row += [res.p_two_tailed, res.t_statistic, res.degrees_of_freedom]
        rows.append(row)
    return _to_csv(header, rows)


def _ordered(errors):
    return sorted(errors.items(), key=lambda kv: (ALGORITHM_IDS.index(kv[0][0]),
                                                  FUNCTION_IDS.index(kv[0][1]), kv[0][2]))


def build_tables(groups, t_test="pooled", window=5):
    """All report tables as ``{file name: csv text}``."""
    errors = final_errors(groups)
    tables = {"aggregates.csv": emit_aggregates(errors)}
    for algo in ALGORITHM_IDS:
        mine = {(f, d): v for (a, f, d), v in errors.items() if a == algo}
        if mine:
            tables[f"table1_{algo}.csv"] = emit_table1(mine)
    tables["table2.csv"] = emit_table2(errors)
    tables["table3.csv"] = emit_table3(groups, window)
    if any(a == "cnea" for a, _, _ in errors):
        tables["table4.csv"] = emit_pvalue_table(errors, t_test)
    return tables


def write_reports(groups, out_dir, t_test="pooled", window=5):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = build_tables(groups, t_test, window)
    for name, text in tables.items():
        (out_dir / name).write_text(text)
    return tables
