"""Command line entry point: ``cnea {run,single,report,plot}``.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from ._validation import ConfigError
from .config import config_from_dict
from .experiment import load_traces, run_experiment, run_single, write_trace, trace_name
from .plots import emit_svg_plots
from .reports import write_reports

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3

# flag -> cnea config key
CN_FLAGS = {
    "--grid-bins": ("grid_bins", int),
    "--community-frac": ("community_frac", float),
    "--samples-per-community": ("samples_per_community", int),
    "--replace-frac": ("replace_frac", float),
    "--pm": ("pm", float),
    "--pr": ("pr", float),
    "--elite-k": ("elite_k", int),
    "--mutation-variance": ("mutation_variance", float),
    "--final-variance": ("final_variance", float),
    "--cooling-start": ("cooling_start", float),
    "--crossover": ("crossover", str),
}


def _csv_list(cast=str):
    def parse(text):
        return [cast(v) for v in text.split(",") if v]
    return parse


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _default_workers():
    try:
        return max(1, int(os.environ.get("CNEA_WORKERS", "1")))
    except ValueError:
        return 1


def _add_cn_flags(p):
    g = p.add_argument_group("counter-niching parameters")
    for flag, (key, cast) in CN_FLAGS.items():
        g.add_argument(flag, dest=f"cn_{key}", type=cast, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="cnea", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a full experiment")
    run.add_argument("--config", type=Path)
    run.add_argument("--algo", type=_csv_list())
    run.add_argument("--fn", type=_csv_list())
    run.add_argument("--dim", type=_csv_list(int))
    run.add_argument("--runs", type=int)
    run.add_argument("--gens", type=int, help="generation budget for every dimension")
    run.add_argument("--seed", type=_u64, help="master seed")
    run.add_argument("--out", type=str)
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--no-plots", action="store_true")
    _add_cn_flags(run)

    single = sub.add_parser("single", help="one run, summary printed as JSON")
    single.add_argument("--algo", required=True)
    single.add_argument("--fn", required=True)
    single.add_argument("--dim", type=int, required=True)
    single.add_argument("--gens", type=int, required=True)
    single.add_argument("--seed", type=_u64, default=0)
    single.add_argument("--out", type=str, help="directory for the trace file")
    _add_cn_flags(single)

    for name, text in (("report", "recompute tables from trace files"),
                       ("plot", "draw SVG charts from trace files")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--out", required=True, help="experiment output directory")
        if name == "report":
            p.add_argument("--t-test", choices=("pooled", "welch"), default="pooled")
            p.add_argument("--window", type=int, default=5)
    return parser


def _cn_overrides(args):
    return {key: getattr(args, f"cn_{key}") for key, _ in CN_FLAGS.values()
            if getattr(args, f"cn_{key}", None) is not None}


def _experiment_config(args):
    doc = {}
    if args.config is not None:
        doc = json.loads(args.config.read_text() or "{}")
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
    for flag, key in (("algo", "algorithms"), ("fn", "functions"), ("dim", "dims"),
                      ("runs", "runs"), ("seed", "master_seed"), ("out", "output_dir"),
                      ("workers", "workers")):
        if getattr(args, flag) is not None:
            doc[key] = getattr(args, flag)
    if "workers" not in doc:
        doc["workers"] = _default_workers()
    doc.setdefault("cnea", {}).update(_cn_overrides(args))
    cfg = config_from_dict(doc)
    if args.gens is not None:
        if args.gens < 0:
            raise ConfigError("must be >= 0", key="gens")
        cfg.max_gen = {d: args.gens for d in cfg.dims}
    return cfg


def cmd_run(args):
    cfg = _experiment_config(args)
    bundle = run_experiment(cfg, plots=not args.no_plots)
    print(f"{len(bundle.trace_files)} runs written to {bundle.output_dir}")
    print(bundle.tables["aggregates.csv"], end="")


def cmd_single(args):
    doc = {"algorithms": [args.algo], "functions": [args.fn], "dims": [args.dim],
           "cnea": _cn_overrides(args)}
    cfg = config_from_dict(doc)
    if args.gens < 0:
        raise ConfigError("must be >= 0", key="gens")
    rec = run_single(args.algo, args.fn, args.dim, args.gens, args.seed,
                     cn_params=cfg.cn_params(), cnea_n=cfg.cnea_n(),
                     baseline_params=cfg.baseline_params(), rotation_seed=cfg.rotation_seed)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_trace(rec, out / trace_name(args.algo, args.fn, args.dim, 0))
    print(json.dumps({"algorithm": rec.algorithm, "function": rec.function, "dim": rec.dim,
                      "seed": rec.seed, "generations": len(rec.trace) - 1,
                      "final_best_error": rec.final_best_error,
                      "final_diversity": float(rec.diversity[-1])}))


def _groups(out):
    trace_dir = Path(out) / "traces"
    if not trace_dir.is_dir():
        raise FileNotFoundError(f"no trace directory at {trace_dir}")
    groups = load_traces(trace_dir)
    if not groups:
        raise FileNotFoundError(f"no trace files in {trace_dir}")
    return groups


def cmd_report(args):
    tables = write_reports(_groups(args.out), args.out, args.t_test, args.window)
    print(tables["aggregates.csv"], end="")


def cmd_plot(args):
    for path in emit_svg_plots(_groups(args.out), Path(args.out) / "plots"):
        print(path)


COMMANDS = {"run": cmd_run, "single": cmd_single, "report": cmd_report, "plot": cmd_plot}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (ConfigError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
