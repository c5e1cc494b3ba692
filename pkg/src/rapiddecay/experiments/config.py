"""Experiment configs: flat ``key = value`` lines under section headers.

    [experiment]
    name = growth-zd2
    kind = growth
    key = zd:2
    seed = 0

    [params]
    r_max = 12
    expected_slope = 2.0

    [case z]            # optional; each case overrides [params] and may set key
    key = zd:1

Without ``[case ...]`` sections the experiment has a single case.
"""

import configparser
import math
import os
from dataclasses import dataclass, field

from ..budget import BUDGET_ENV, DEFAULT_BUDGET

KINDS = (
    "blowup", "bcp", "c-set-triples", "distortion", "growth", "interval-growth",
    "kesten", "median-suite", "mozes", "opnorm", "partition", "prop-max",
    "quasiconvexity", "rd-profile", "rd-steps", "sageev",
)

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class ConfigError(ValueError):
    pass


class Params:
    """String parameters with typed accessors."""

    def __init__(self, values, where):
        self._values = dict(values)
        self.where = where

    def __contains__(self, name):
        return name in self._values

    def as_dict(self):
        return dict(sorted(self._values.items()))

    def _raw(self, name, default, required):
        if name in self._values:
            return self._values[name]
        if required:
            raise ConfigError(f"{self.where}: missing parameter '{name}'")
        return default

    def _convert(self, name, raw, fn, what):
        try:
            return fn(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{self.where}: '{name}' = {raw!r} is not {what}") from exc

    def str(self, name, default=None, required=False):
        return self._raw(name, default, required)

    def int(self, name, default=None, required=False):
        raw = self._raw(name, None, required)
        return default if raw is None else self._convert(name, raw, int, "an integer")

    def float(self, name, default=None, required=False):
        raw = self._raw(name, None, required)
        if raw is None:
            return default
        value = self._convert(name, raw, float, "a number")
        if not math.isfinite(value):
            raise ConfigError(f"{self.where}: '{name}' must be finite")
        return value

    def bool(self, name, default=None, required=False):
        raw = self._raw(name, None, required)
        if raw is None:
            return default
        low = raw.strip().lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ConfigError(f"{self.where}: '{name}' = {raw!r} is not a boolean")

    def list(self, name, default=None, required=False):
        raw = self._raw(name, None, required)
        if raw is None:
            return default
        return [s.strip() for s in raw.split(",") if s.strip()]

    def ints(self, name, default=None, required=False):
        items = self.list(name, None, required)
        if items is None:
            return default
        return [self._convert(name, s, int, "a list of integers") for s in items]

    def floats(self, name, default=None, required=False):
        items = self.list(name, None, required)
        if items is None:
            return default
        return [self._convert(name, s, float, "a list of numbers") for s in items]


@dataclass
class Case:
    name: str
    key: str
    params: Params


@dataclass
class ExperimentConfig:
    name: str
    kind: str
    cases: list
    seed: int = 0
    budget: int = None
    output: str = "reports"
    record_timing: bool = False
    source: str = None
    echo: dict = field(default_factory=dict)

    def effective_budget(self):
        """The environment variable overrides the config, which overrides the default."""
        env = os.environ.get(BUDGET_ENV)
        if env:
            return int(float(env))
        return self.budget if self.budget is not None else DEFAULT_BUDGET

    def output_paths(self, out_dir=None):
        base = out_dir if out_dir is not None else self.output
        return (os.path.join(base, f"{self.name}.report.json"),
                os.path.join(base, f"{self.name}.rows.csv"))


def parse_config(text, source=None):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                   delimiters=("=",), strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if "experiment" not in cp:
        raise ConfigError("missing [experiment] section")
    exp = Params(cp["experiment"], "[experiment]")
    kind = exp.str("kind", required=True)
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}; known: {', '.join(KINDS)}")
    default_name = os.path.splitext(os.path.basename(source))[0] if source else kind
    base = dict(cp["params"]) if "params" in cp else {}
    cases = []
    for section in cp.sections():
        if section.startswith("case"):
            cname = section[4:].strip()
            if not cname:
                raise ConfigError(f"[{section}] needs a case name")
            values = {**base, **cp[section]}
            key = values.pop("key", exp.str("key", ""))
            cases.append(Case(cname, key, Params(values, f"[{section}]")))
        elif section not in ("experiment", "params"):
            raise ConfigError(f"unknown section [{section}]")
    if not cases:
        cases.append(Case("main", exp.str("key", ""), Params(base, "[params]")))
    budget = exp.int("budget")
    if budget is not None and budget <= 0:
        raise ConfigError("[experiment]: budget must be positive")
    echo = {s: dict(sorted(cp[s].items())) for s in cp.sections()}
    return ExperimentConfig(
        name=exp.str("name", default_name), kind=kind, cases=cases,
        seed=exp.int("seed", 0), budget=budget,
        output=exp.str("output", "reports"), record_timing=exp.bool("record_timing", False),
        source=source, echo=echo)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=path)
