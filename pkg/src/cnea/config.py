"""Experiment configuration: JSON document -> :class:`ExperimentConfig`."""

import json
import numbers
from dataclasses import dataclass, field, fields

from ._validation import ConfigError
from .baselines import BaselineParams
from .niching import CnParams
from .rng import ALGORITHM_IDS, FUNCTION_IDS

DEFAULT_MAX_GEN = {20: 500, 50: 1000, 100: 2000}

# config key -> CnParams field
CNEA_KEYS = {
    "n": None,
    "grid_bins": "g",
    "community_frac": "rho",
    "samples_per_community": "s",
    "replace_frac": "replace_frac",
    "pm": "pm",
    "pr": "pr",
    "elite_k": "elite_k",
    "mutation_variance": "mutation_variance",
    "final_variance": "final_variance",
    "cooling_start": "cooling_start",
    "mutation_mode": "mutation_mode",
    "crossover": "crossover",
}
BASELINE_KEYS = tuple(f.name for f in fields(BaselineParams))
REPORT_KEYS = ("t_test", "diversity_window")
TOP_KEYS = ("algorithms", "functions", "dims", "runs", "max_gen", "master_seed",
            "rotation_seed", "output_dir", "workers", "cnea", "baselines", "report")


def default_max_gen(dim):
    """Generation budget for dimensions without an explicit entry."""
    return DEFAULT_MAX_GEN.get(dim, max(500, 20 * dim))


@dataclass
class ExperimentConfig:
    algorithms: tuple = ("cnea",)
    functions: tuple = FUNCTION_IDS
    dims: tuple = (20, 50, 100)
    runs: int = 30
    max_gen: dict = field(default_factory=dict)
    master_seed: int = 0
    rotation_seed: int = 0
    output_dir: str = "results"
    workers: int = 1
    cnea: dict = field(default_factory=dict)
    baselines: dict = field(default_factory=dict)
    t_test: str = "pooled"
    diversity_window: int = 5

    def gens_for(self, dim):
        return self.max_gen.get(dim, default_max_gen(dim))

    def cnea_n(self):
        return self.cnea.get("n", 300)

    def cn_params(self):
        kw = {CNEA_KEYS[k]: v for k, v in self.cnea.items() if CNEA_KEYS[k] is not None}
        return CnParams(**kw)

    def baseline_params(self):
        return BaselineParams(**self.baselines)

    def to_dict(self):
        return {
            "algorithms": list(self.algorithms),
            "functions": list(self.functions),
            "dims": list(self.dims),
            "runs": self.runs,
            "max_gen": {str(d): self.gens_for(d) for d in self.dims},
            "master_seed": self.master_seed,
            "rotation_seed": self.rotation_seed,
            "output_dir": self.output_dir,
            "workers": self.workers,
            "cnea": dict(self.cnea),
            "baselines": dict(self.baselines),
            "report": {"t_test": self.t_test, "diversity_window": self.diversity_window},
        }


def _is_int(v):
    return isinstance(v, numbers.Integral) and not isinstance(v, bool)


def _id_list(value, allowed, key):
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError("must be a non-empty list", key=key)
    for i, v in enumerate(value):
        if v not in allowed:
            raise ConfigError(f"unknown id {v!r}; expected one of {allowed}", key=f"{key}[{i}]")
    if len(set(value)) != len(value):
        raise ConfigError("duplicate ids", key=key)
    # canonical order keeps file and table layout stable
    return tuple(a for a in allowed if a in value)


def _positive_int(value, key, minimum=1):
    if not _is_int(value) or value < minimum:
        raise ConfigError(f"must be an integer >= {minimum}", key=key)
    return int(value)


def _section(doc, name, allowed):
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError("must be an object", key=name)
    for k in sec:
        if k not in allowed:
            raise ConfigError("unknown key", key=f"{name}.{k}")
    return dict(sec)


def config_from_dict(doc):
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    for k in doc:
        if k not in TOP_KEYS:
            raise ConfigError("unknown key", key=k)
    cfg = ExperimentConfig()
    if "algorithms" in doc:
        cfg.algorithms = _id_list(doc["algorithms"], ALGORITHM_IDS, "algorithms")
    if "functions" in doc:
        cfg.functions = _id_list(doc["functions"], FUNCTION_IDS, "functions")
    if "dims" in doc:
        dims = doc["dims"]
        if not isinstance(dims, list) or not dims:
            raise ConfigError("must be a non-empty list", key="dims")
        cfg.dims = tuple(sorted({_positive_int(d, f"dims[{i}]") for i, d in enumerate(dims)}))
    if "runs" in doc:
        cfg.runs = _positive_int(doc["runs"], "runs")
    if "max_gen" in doc:
        mg = doc["max_gen"]
        if not isinstance(mg, dict):
            raise ConfigError("must be an object mapping dimension to generations", key="max_gen")
        for d, g in mg.items():
            try:
                dim = int(d)
            except ValueError:
                raise ConfigError("keys must be dimensions", key=f"max_gen.{d}") from None
            cfg.max_gen[dim] = _positive_int(g, f"max_gen.{d}", minimum=0)
    for key in ("master_seed", "rotation_seed"):
        if key in doc:
            if not _is_int(doc[key]) or not 0 <= doc[key] < 2**64:
                raise ConfigError("must be an unsigned 64-bit integer", key=key)
            setattr(cfg, key, int(doc[key]))
    if "output_dir" in doc:
        if not isinstance(doc["output_dir"], str) or not doc["output_dir"]:
            raise ConfigError("must be a non-empty string", key="output_dir")
        cfg.output_dir = doc["output_dir"]
    if "workers" in doc:
        cfg.workers = _positive_int(doc["workers"], "workers")
    cfg.cnea = _section(doc, "cnea", CNEA_KEYS)
    cfg.baselines = _section(doc, "baselines", BASELINE_KEYS)
    report = _section(doc, "report", REPORT_KEYS)
    if "t_test" in report:
        if report["t_test"] not in ("pooled", "welch"):
            raise ConfigError("must be 'pooled' or 'welch'", key="report.t_test")
        cfg.t_test = report["t_test"]
    if "diversity_window" in report:
        cfg.diversity_window = _positive_int(report["diversity_window"], "report.diversity_window")
    validate(cfg)
    return cfg


def validate(cfg):
    """Build the parameter blocks once so bad values fail before any run starts."""
    if "n" in cfg.cnea:
        _positive_int(cfg.cnea["n"], "cnea.n", minimum=2)
    for section, build in (("cnea", cfg.cn_params), ("baselines", cfg.baseline_params)):
        try:
            build()
        except ConfigError as exc:
            raise ConfigError(str(exc).split(": ", 1)[-1],
                              key=f"{section}.{exc.key}" if exc.key else section) from None
        except TypeError as exc:
            raise ConfigError(str(exc), key=section) from None
    if "cea" in cfg.algorithms and cfg.baseline_params().n != 400:
        raise ConfigError("the cellular EA needs n = 400", key="baselines.n")
    return cfg


def parse_config(text):
    """Parse a JSON configuration document; omitted fields take their defaults."""
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from None
    return config_from_dict(doc)
