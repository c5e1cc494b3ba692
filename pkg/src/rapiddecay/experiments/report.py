"""Experiment reports and their deterministic JSON/CSV rendering."""

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class MissingWitnessError(ValueError):
    """A failing check was recorded without a concrete witness."""


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    witness: object = None


@dataclass
class ExperimentReport:
    name: str
    kind: str
    config: dict
    rows: list = field(default_factory=list)
    fits: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    budget: dict = field(default_factory=dict)
    timing: dict = None

    def row(self, **values):
        self.rows.append(values)

    def fit(self, name, slope, residual, window, **extra):
        self.fits.append({"name": name, "slope": slope, "residual": residual,
                          "window": list(window), **extra})

    def check(self, name, passed, witness=None, **detail):
        passed = bool(passed)
        if not passed and witness is None:
            raise MissingWitnessError(f"check {name!r} failed without a witness")
        self.checks.append(Check(name, passed, detail, witness))
        return passed

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self):
        return 0 if self.passed else 2

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        out = {
            "name": self.name,
            "kind": self.kind,
            "config": self.config,
            "status": "pass" if self.passed else "fail",
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail,
                        "witness": c.witness} for c in self.checks],
            "fits": self.fits,
            "rows": len(self.rows),
            "budget": self.budget,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return jsonable(out)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_csv(self):
        columns = []
        for r in self.rows:
            for k in r:
                if k not in columns:
                    columns.append(k)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in self.rows:
            w.writerow([csv_cell(r.get(k)) for k in columns])
        return buf.getvalue()

    def write(self, json_path, csv_path):
        atomic_write(json_path, self.to_json())
        atomic_write(csv_path, self.to_csv())


def format_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def format_fraction(q):
    return f"{q.numerator}/{q.denominator}"


def csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    if isinstance(v, (list, tuple)):
        return " ".join(csv_cell(a) for a in v)
    return str(v)


def jsonable(v):
    """Plain JSON values: exact rationals as 'num/den', non-finite floats as strings."""
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        x = float(v)
        return x if math.isfinite(x) else format_float(x)
    if isinstance(v, dict):
        return {str(k): jsonable(a) for k, a in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(a) for a in v]
    if isinstance(v, (set, frozenset)):
        return sorted((jsonable(a) for a in v), key=repr)
    return str(v)


def atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
