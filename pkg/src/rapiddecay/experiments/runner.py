"""Dispatch an experiment config to its kind and assemble the report."""

import time
import warnings

from ..budget import BudgetExceeded
from ..cube import COMPLEX_KEYS, EXAMPLE_COMPLEXES, NotCAT0Error, get_complex
from ..fitting import FitUnstableWarning
from ..groups import EXAMPLE_GROUPS, GROUP_KEYS, get_group, metric_for
from .config import KINDS, ConfigError, load_config
from .kinds import KIND_FUNCTIONS
from .report import ExperimentReport


class _Context:
    def __init__(self, config, report):
        self.config = config
        self.report = report
        self.seed = config.seed
        self.budget = config.effective_budget()
        self.models = {}
        self.single = len(config.cases) == 1

    def _name(self, case, name):
        return name if self.single else f"{case.name}/{name}"

    def group(self, key):
        if not key:
            raise ConfigError("this experiment needs a group key")
        try:
            model = get_group(key)
        except (ValueError, KeyError, OSError) as exc:
            raise ConfigError(f"unknown group key {key!r}: {exc}") from exc
        metric_for(model).budget = self.budget
        self.models[key] = model
        return model

    def complex(self, key):
        if not key:
            raise ConfigError("this experiment needs a complex key")
        try:
            return get_complex(key)
        except NotCAT0Error:
            raise
        except (ValueError, KeyError, OSError) as exc:
            raise ConfigError(f"unknown complex key {key!r}: {exc}") from exc

    def row(self, case, **values):
        if not self.single:
            values = {"case": case.name, **values}
        self.report.row(**values)

    def fit(self, case, name, slope, residual, window, **extra):
        self.report.fit(self._name(case, name), slope, residual, window, **extra)

    def check(self, case, name, passed, witness=None, **detail):
        return self.report.check(self._name(case, name), passed, witness, **detail)


def run(config, out_dir=None, write=True):
    """Run ``config`` (an ExperimentConfig or a path) and return the report.

    Reports are written atomically unless ``write`` is false.  Configuration
    problems raise ConfigError; budget overruns and non-CAT(0) inputs become
    failed checks carrying the offending witness.
    """
    if isinstance(config, str):
        config = load_config(config)
    # fresh models so that cached enumerations from earlier runs cannot leak in
    get_group.cache_clear()
    get_complex.cache_clear()
    report = ExperimentReport(config.name, config.kind, config.echo)
    ctx = _Context(config, report)
    fn = KIND_FUNCTIONS[config.kind]
    exceeded = None
    timing = {}
    t_all = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FitUnstableWarning)
        for case in config.cases:
            t0 = time.perf_counter()
            try:
                fn(ctx, case)
            except BudgetExceeded as exc:
                exceeded = exc
                ctx.check(case, "budget", False,
                          {"what": exc.what, "cap": exc.cap, "reached": exc.reached})
            except NotCAT0Error as exc:
                ctx.check(case, "cat0-input", False,
                          {"reason": exc.reason, "witness": exc.witness})
            timing[case.name] = time.perf_counter() - t0
    report.budget = {
        "cap": ctx.budget,
        "elements_enumerated": max((len(metric_for(m).lengths) for m in ctx.models.values()),
                                   default=0),
        "exceeded": exceeded is not None,
    }
    if config.record_timing:
        report.timing = {"total_seconds": time.perf_counter() - t_all, "cases": timing}
    if write:
        report.write(*config.output_paths(out_dir))
    return report


def list_registry():
    """Sorted catalog of group keys, complex keys and experiment kinds."""
    return {
        "groups": sorted(set(EXAMPLE_GROUPS) | set(GROUP_KEYS)),
        "complexes": sorted(set(EXAMPLE_COMPLEXES) | set(COMPLEX_KEYS)),
        "kinds": sorted(KINDS),
    }
