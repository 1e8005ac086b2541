"""Suite orchestration: grids of (function, parameters) cells, a deterministic
merge, and report emission as JSON, CSV or Markdown."""
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
import io
import json
import math
import os
from pathlib import Path
import time

import numpy as np

from . import zoo
from ._version import __version__
from .core import BooleanFunction, homogeneous_part, truncate_degree
from .exceptions import InputError
from .headline import concentration_mass, entropy_bound_fit, witness_report
from .identities import (
    cross_influence_restriction_check,
    identities_suite,
    low_degree_influence_sum_check,
    random_low_degree,
    random_real,
)
from .inequalities import (
    THEOREMS,
    ParameterSchedule,
    base_case_check,
    boosted_base_check,
    corollary_param_check,
    kkl_chain_check,
    main_inequality_check,
)
from .partitions import exchange_check, hypercontractivity_check
from .reports import compare, encode, make_report, mp, to_mpf

SCHEMA_VERSION = 1
SUITES = ("identities", "base", "boosted", "main", "corollaries", "headline")
CACHE_ENV = "BOOLFOURIER_CACHE_DIR"

_DEFAULT_MAX_N = {"identities": 10, "base": 14, "boosted": 12, "main": 10,
                  "corollaries": 10, "headline": 16}


def parse_number(text):
    """'3', '1/16', '2^-20' (exact) or '1e-1100' (high precision)."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(text)
    s = str(text).strip()
    try:
        if "^" in s:
            b, e = s.split("^")
            e = int(e)
            return Fraction(int(b)) ** e
        if "e" in s.lower() and "/" not in s:
            v = mp.mpf(s)
            q = Fraction(s)
            return q if q.denominator.bit_length() < 4096 and to_mpf(q) == v else v
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse number {text!r}") from None


@dataclass
class SuiteConfig:
    """One verification run. ``families`` holds zoo specs or bare family names
    (expanded over the standard zoo); empty means the whole standard zoo up to
    ``max_n``. ``params`` overrides the suite's default parameter grid."""

    suite: str
    families: list = field(default_factory=list)
    max_n: int = None
    seed: int = 0
    threads: int = 1
    params: dict = field(default_factory=dict)
    corrupt_rhs: bool = False
    output: str = None
    format: str = "json"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise InputError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.max_n is None:
            self.max_n = _DEFAULT_MAX_N[self.suite]
        if self.threads < 1:
            raise InputError("threads must be at least 1")
        if self.format not in ("json", "csv", "markdown"):
            raise InputError(f"unknown format {self.format!r}")
        self.families = list(self.families or [])

    @classmethod
    def from_json(cls, text, source="<config>"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise InputError(f"{source}: top level must be an object")
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InputError(f"{source}: unknown keys {sorted(unknown)}")
        if "suite" not in data:
            raise InputError(f"{source}: missing key 'suite'")
        return cls(**data)

    def echo(self):
        """Config fields that determine the rows (thread count and output excluded)."""
        d = asdict(self)
        for k in ("threads", "output", "format"):
            d.pop(k)
        return d


@dataclass
class RunReport:
    config: dict
    rows: list
    aggregate: dict
    timing: dict
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @property
    def exit_code(self):
        return 0 if self.aggregate["failed"] == 0 else 2

    def to_dict(self, timing=True):
        out = {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "config": encode(self.config),
            "aggregate": self.aggregate,
            "rows": self.rows,
        }
        if timing:
            out["timing"] = self.timing
        return out


def _expand_families(config):
    zoo_specs = zoo.standard_zoo(config.max_n)
    if not config.families:
        return zoo_specs
    out = []
    for item in config.families:
        if ":" in item or "=" in item:
            spec = zoo.parse_family(item)
            if zoo.family_n(spec) is not None and zoo.family_n(spec) > config.max_n:
                raise InputError(f"{item} has more than max_n={config.max_n} coordinates")
            out.append(spec)
        else:
            if item not in zoo.FAMILIES:
                raise InputError(f"unknown family {item!r}")
            out.extend(s for s in zoo_specs if s.family == item)
    return out


def _cell_rng(seed, index):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _zero_mean_truncation(f, d):
    """f^{<=d} - f^(empty)."""
    low = truncate_degree(f, d)
    return low - truncate_degree(f, 0)


def _band(f, lo, hi):
    """Part of f on levels lo..hi."""
    out = truncate_degree(f, hi)
    return out - truncate_degree(f, lo - 1) if lo >= 1 else out


# -- cell builders ------------------------------------------------------------------
# Each returns a list of (label, thunk) pairs; a thunk gets the cell rng.


def _identities_cells(config, specs):
    cells = []
    for spec in specs:
        def run(rng, spec=spec):
            f = zoo.make(spec)
            g = random_real(f.n, rng)
            reps = identities_suite(f, g, seed=int(rng.integers(1 << 31)))
            reps += kkl_chain_check(f, min(f.n, 3))
            return reps
        cells.append((spec.label(), run))
    count = int(config.params.get("instances", 20))
    n_lo, n_hi = config.params.get("instance_n", [2, min(config.max_n, 12)])
    for i in range(count):
        def run(rng):
            n = int(rng.integers(n_lo, n_hi + 1))
            d = int(rng.integers(1, min(n, 4) + 1))
            hs = [random_low_degree(n, d, rng, scale_bits=3) for _ in range(3)]
            partners = [random_real(n, rng, scale_bits=3) for _ in range(3)]
            f = BooleanFunction.from_table(rng.integers(0, 2, size=1 << n))
            I = int(rng.integers(0, 1 << n))
            return [low_degree_influence_sum_check(f),
                    cross_influence_restriction_check(f, partners[0], I),
                    exchange_check(hs, d), exchange_check(hs, d, partners),
                    hypercontractivity_check(hs[0], 4, d)]
        cells.append((f"instance-{i}", run))
    return cells


def _base_cells(config, specs):
    degrees = config.params.get("degrees", list(range(1, 9)))
    deltas = [parse_number(x) for x in config.params.get(
        "deltas", [f"2^-{i}" for i in range(1, 21)])]
    cells = []
    for spec in specs:
        for d in degrees:
            def run(rng, spec=spec, d=d):
                f = zoo.make(spec)
                if d > f.n:
                    return []
                g = _zero_mean_truncation(f, d)
                return base_case_check(f, g, deltas, d)
            cells.append((f"{spec.label()}|d={d}", run))
    return cells


def _boosted_cells(config, specs):
    etas = [parse_number(x) for x in config.params.get("etas", ["1/2", "2^-20", "1e-1100"])]
    cells = []
    for spec in specs:
        if zoo.family_n(spec) < 10:
            continue
        for eta in etas:
            def run(rng, spec=spec, eta=eta):
                f = zoo.make(spec)
                return boosted_base_check(f, homogeneous_part(f, 10), [eta])
            cells.append((f"{spec.label()}|eta={encode(eta)}", run))
    return cells


_DEFAULT_SCHEDULES = [
    {"degrees": [1, 2], "deltas": ["1/4"], "alpha": 1, "eps": "1/4"},
    {"degrees": [1, 3], "deltas": ["1/64"], "alpha": "1/2", "eps": "1/4"},
    {"degrees": [1, 2, 4], "deltas": ["1/4", "1/256"], "alpha": "1/2", "eps": "1/4"},
]


def _schedule(raw):
    return ParameterSchedule([parse_number(d) for d in raw["degrees"]],
                             [parse_number(x) for x in raw["deltas"]],
                             parse_number(raw.get("alpha", 1)),
                             float(parse_number(raw.get("eps", "1/4"))))


def _main_cells(config, specs):
    schedules = config.params.get("schedules", _DEFAULT_SCHEDULES)
    theorems = config.params.get("theorems", list(THEOREMS))
    cells = []
    for spec in specs:
        for si, raw in enumerate(schedules):
            for th in theorems:
                def run(rng, spec=spec, raw=raw, th=th):
                    s = _schedule(raw)
                    f = zoo.make(spec)
                    dk = int(s.d(s.k))
                    if dk > f.n:
                        return []
                    lo = math.ceil(s.alpha * dk)
                    return [main_inequality_check(f, _band(f, max(lo, 1), dk), s, th)]
                cells.append((f"{spec.label()}|schedule={si}|{th}", run))
    return cells


def _corollary_cells(config, specs):
    grid = config.params.get("grid", [{"d": 4, "delta": "1/16", "alpha": "1/2", "eps": "1/4"},
                                      {"d": 2, "delta": "2^-10", "alpha": 1, "eps": "1/4"}])
    which = config.params.get("theorems", list(THEOREMS))
    cells = []
    for spec in specs:
        for gi, p in enumerate(grid):
            for w in which:
                def run(rng, spec=spec, p=p, w=w):
                    f = zoo.make(spec)
                    d = int(p["d"])
                    if d > f.n:
                        return []
                    alpha = parse_number(p["alpha"])
                    lo = math.ceil(alpha * d)
                    g = _band(f, max(lo, 1), d)
                    return [corollary_param_check(f, g, d, parse_number(p["delta"]), alpha,
                                                  float(parse_number(p["eps"])), w)]
                cells.append((f"{spec.label()}|grid={gi}|{w}", run))
    return cells


def _headline_cells(config, specs):
    from . import calibration as cal
    min_var = float(config.params.get("min_variance", 0.1))
    cells = []
    for spec in specs:
        def run(rng, spec=spec):
            f = zoo.make(spec)
            if float(f.variance()) < min_var:
                return []
            reps = [witness_report(f, cal.WITNESS_THRESHOLD)]
            fit = entropy_bound_fit(f)
            K = cal.ENTROPY_K_THRESHOLD
            reps.append(make_report(
                "entropy-influence", fit.entropy,
                {"level_weight": K * fit.weighted_sum, "influence": K * fit.total_influence},
                params={"n": f.n, "K": K}, witness={"fitted_K": fit.K, "buckets": fit.buckets},
                functions=(f,)))
            conc = concentration_mass(f, cal.CONCENTRATION_C, cal.CONCENTRATION_ETA)
            reps.append(make_report(
                "fourier-concentration", conc.mass, {"budget": conc.budget},
                params={"n": f.n, "C": cal.CONCENTRATION_C, "eta": cal.CONCENTRATION_ETA},
                witness={"threshold": conc.threshold, "c_infimum": conc.c_infimum},
                functions=(f,)))
            return reps
        cells.append((spec.label(), run))
    return cells


_BUILDERS = {
    "identities": _identities_cells,
    "base": _base_cells,
    "boosted": _boosted_cells,
    "main": _main_cells,
    "corollaries": _corollary_cells,
    "headline": _headline_cells,
}


def corrupt(report):
    """Self-test: push the RHS below the LHS so the row must fail."""
    lhs, rhs = report.lhs, report.rhs
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        bad = rhs - abs(rhs) - abs(lhs) - 1
    else:
        bad = to_mpf(rhs) - abs(to_mpf(rhs)) - abs(to_mpf(lhs)) - 1
    report.terms = {**report.terms, "corruption": bad - rhs}
    report.rhs = bad
    report.slack, report.passed = compare(lhs, bad)
    report.flags = report.flags + ["corrupted"]
    return report


def _ratio(row):
    try:
        lhs, rhs = to_mpf(row.lhs), to_mpf(row.rhs)
    except (TypeError, ValueError):
        return None
    if rhs <= 0 or "identity" in row.flags:
        return None
    return float(lhs / rhs) if lhs / rhs < 1e300 else None


def run_suite(config):
    start = time.perf_counter()
    specs = _expand_families(config)
    cells = _BUILDERS[config.suite](config, specs)

    def work(item):
        index, (label, thunk) = item
        reps = thunk(_cell_rng(config.seed, index))
        if config.corrupt_rhs:
            reps = [corrupt(r) for r in reps]
        return label, reps

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, enumerate(cells)))
    else:
        results = [work(item) for item in enumerate(cells)]
    rows = []
    per = {}
    for label, reps in results:
        for r in reps:
            rows.append({"cell": label, **r.to_dict()})
            stats = per.setdefault(r.inequality, {"rows": 0, "passed": 0, "failed": 0,
                                                  "flagged": 0, "max_ratio": None})
            stats["rows"] += 1
            stats["passed" if r.passed else "failed"] += 1
            if any(fl.startswith("outside-hypothesis") for fl in r.flags):
                stats["flagged"] += 1
            q = _ratio(r)
            if q is not None and (stats["max_ratio"] is None or q > stats["max_ratio"]):
                stats["max_ratio"] = q
    aggregate = {
        "cells": len(cells),
        "rows": len(rows),
        "passed": sum(s["passed"] for s in per.values()),
        "failed": sum(s["failed"] for s in per.values()),
        "flagged": sum(s["flagged"] for s in per.values()),
        "by_inequality": dict(sorted(per.items())),
    }
    if config.suite == "headline":
        fitted = [r["lhs"] for r in rows if r["lemma"] == "min-entropy-witness"]
        ks = [r["witness"]["fitted_K"] for r in rows if r["lemma"] == "entropy-influence"]
        aggregate["max_fitted"] = {"C_star": max(fitted, default=None),
                                   "K": max(ks, default=None)}
    timing = {
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "runtime_seconds": round(time.perf_counter() - start, 3),
        "threads": config.threads,
    }
    return RunReport(config.echo(), rows, aggregate, timing)


# -- emission ---------------------------------------------------------------------

CSV_FIELDS = ["cell", "lemma", "pass", "lhs", "rhs", "slack", "flags", "params", "digest"]


def _csv_text(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r["cell"], r["lemma"], r["pass"], r["lhs"], r["rhs"], r["slack"],
                    ";".join(r["flags"]), json.dumps(r["params"], sort_keys=True), r["digest"]])
    return buf.getvalue()


def _markdown_text(data):
    agg = data["aggregate"]
    cfg = data["config"]
    lines = [f"# {cfg['suite']} suite", "",
             f"seed {cfg['seed']}, {agg['cells']} cells, {agg['rows']} rows, "
             f"{agg['passed']} passed, {agg['failed']} failed, {agg['flagged']} outside hypothesis",
             "", "| inequality | rows | pass | fail | outside hypothesis | max lhs/rhs |",
             "|---|---|---|---|---|---|"]
    for name, s in agg["by_inequality"].items():
        ratio = "" if s["max_ratio"] is None else f"{s['max_ratio']:.6g}"
        lines.append(f"| {name} | {s['rows']} | {s['passed']} | {s['failed']} | "
                     f"{s['flagged']} | {ratio} |")
    bad = [r for r in data["rows"] if not r["pass"]]
    if bad:
        lines += ["", "## Failures", ""]
        lines += [f"- `{r['cell']}` {r['lemma']}: lhs {r['lhs']} > rhs {r['rhs']}" for r in bad]
    return "\n".join(lines) + "\n"


def dumps(report, fmt="json", timing=True):
    data = report.to_dict(timing=timing) if isinstance(report, RunReport) else report
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        return _csv_text(data["rows"])
    if fmt == "markdown":
        return _markdown_text(data)
    raise InputError(f"unknown format {fmt!r}")


def default_output(config):
    base = os.environ.get(CACHE_ENV)
    if not base:
        return None
    ext = {"json": "json", "csv": "csv", "markdown": "md"}[config.format]
    return str(Path(base) / f"{config.suite}-seed{config.seed}.{ext}")


def emit_report(report, fmt="json", path=None):
    """Write the report; returns the text. IO errors propagate."""
    text = dumps(report, fmt)
    if path is not None:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    return text
